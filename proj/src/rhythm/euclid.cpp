#include "xenakis/rhythm/euclid.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "xenakis/error.hpp"

namespace xenakis::rhythm {

std::string OnsetPattern::text() const {
  std::string out(steps, '.');
  for (auto i : onsets) out[i] = 'x';
  return out;
}

OnsetPattern bjorklund(std::size_t k, std::size_t n) {
  if (n == 0 || k > n)
    throw Error(ErrorCode::InvalidArity,
                "E(" + std::to_string(k) + "," + std::to_string(n) +
                    ") needs n >= 1 and k <= n");
  OnsetPattern out{n, {}};
  if (k == 0) return out;

  // Repeatedly append one remainder group to each leading group until at
  // most one remainder group is left.
  using Group = std::vector<bool>;
  std::vector<Group> heads(k, Group{true});
  std::vector<Group> tails(n - k, Group{false});
  while (tails.size() > 1) {
    const std::size_t m = std::min(heads.size(), tails.size());
    std::vector<Group> merged;
    merged.reserve(m);
    for (std::size_t i = 0; i < m; ++i) {
      Group g = heads[i];
      g.insert(g.end(), tails[i].begin(), tails[i].end());
      merged.push_back(std::move(g));
    }
    std::vector<Group> rest = heads.size() > m
                                  ? std::vector<Group>(heads.begin() + m, heads.end())
                                  : std::vector<Group>(tails.begin() + m, tails.end());
    heads = std::move(merged);
    tails = std::move(rest);
  }

  std::vector<bool> seq;
  seq.reserve(n);
  for (const auto* groups : {&heads, &tails})
    for (const auto& g : *groups) seq.insert(seq.end(), g.begin(), g.end());

  auto first = std::find(seq.begin(), seq.end(), true);
  std::rotate(seq.begin(), first, seq.end());
  for (std::size_t i = 0; i < n; ++i)
    if (seq[i]) out.onsets.push_back(i);
  return out;
}

double evenness(const OnsetPattern& pattern) {
  if (pattern.onsets.size() < 2)
    throw Error(ErrorCode::TooFewOnsets, "evenness needs at least 2 onsets");
  const double n = static_cast<double>(pattern.steps);
  double sum = 0.0;
  for (std::size_t i = 0; i < pattern.onsets.size(); ++i)
    for (std::size_t j = i + 1; j < pattern.onsets.size(); ++j) {
      const double gap = std::fabs(static_cast<double>(pattern.onsets[j]) -
                                   static_cast<double>(pattern.onsets[i]));
      sum += 2.0 * std::sin(std::numbers::pi * gap / n);
    }
  return sum;
}

}  // namespace xenakis::rhythm
