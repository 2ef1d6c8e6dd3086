#include "xenakis/service/loop_store.hpp"

#include "xenakis/error.hpp"

namespace xenakis::service {

LoopStore::LoopStore(std::size_t capacity) : capacity_(capacity) {
  if (capacity == 0) throw Error(ErrorCode::InvalidArgument, "loop store capacity must be > 0");
}

void LoopStore::put(const std::string& id, Blob wav) {
  std::lock_guard guard(mutex_);
  if (auto it = entries_.find(id); it != entries_.end()) {
    order_.splice(order_.begin(), order_, it->second.position);
    it->second.wav = std::move(wav);
    return;
  }
  if (entries_.size() >= capacity_) {
    entries_.erase(order_.back());
    order_.pop_back();
  }
  order_.push_front(id);
  entries_.emplace(id, Entry{std::move(wav), order_.begin()});
}

LoopStore::Blob LoopStore::get(const std::string& id) {
  std::lock_guard guard(mutex_);
  auto it = entries_.find(id);
  if (it == entries_.end()) return nullptr;
  order_.splice(order_.begin(), order_, it->second.position);
  return it->second.wav;
}

bool LoopStore::contains(const std::string& id) const {
  std::lock_guard guard(mutex_);
  return entries_.contains(id);
}

std::size_t LoopStore::size() const {
  std::lock_guard guard(mutex_);
  return entries_.size();
}

}  // namespace xenakis::service
