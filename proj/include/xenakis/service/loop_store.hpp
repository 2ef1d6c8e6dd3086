#pragma once

#include <cstddef>
#include <cstdint>
#include <list>
#include <memory>
#include <mutex>
#include <string>
#include <unordered_map>
#include <vector>

namespace xenakis::service {

/// Rendered WAV files keyed by content id, least recently used evicted first.
class LoopStore {
 public:
  using Blob = std::shared_ptr<const std::vector<std::uint8_t>>;

  explicit LoopStore(std::size_t capacity);

  /// Inserts or refreshes; evicts the oldest entry when full.
  void put(const std::string& id, Blob wav);
  /// Marks the entry as recently used. Null when unknown or evicted.
  Blob get(const std::string& id);
  bool contains(const std::string& id) const;

  std::size_t size() const;
  std::size_t capacity() const noexcept { return capacity_; }

 private:
  using Order = std::list<std::string>;

  struct Entry {
    Blob wav;
    Order::iterator position;
  };

  std::size_t capacity_;
  mutable std::mutex mutex_;
  Order order_;  // front = most recent
  std::unordered_map<std::string, Entry> entries_;
};

}  // namespace xenakis::service
