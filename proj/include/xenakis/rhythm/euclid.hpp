#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace xenakis::rhythm {

/// k onsets on an n-step circle.
struct OnsetPattern {
  std::size_t steps = 0;
  std::vector<std::size_t> onsets;  // sorted, each < steps

  /// 'x' for an onset, '.' otherwise.
  std::string text() const;

  friend bool operator==(const OnsetPattern&, const OnsetPattern&) = default;
};

/// Euclidean rhythm E(k, n) by Bjorklund's algorithm, rotated so that step 0
/// carries an onset whenever k > 0. Throws Error(InvalidArity) for n == 0 or
/// k > n.
OnsetPattern bjorklund(std::size_t k, std::size_t n);

/// Sum of chord lengths between every pair of onsets placed on the unit
/// circle. Throws Error(TooFewOnsets) for fewer than two onsets.
double evenness(const OnsetPattern& pattern);

}  // namespace xenakis::rhythm
