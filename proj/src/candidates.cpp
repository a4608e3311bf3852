#include "robavg/candidates.hpp"

#include "robavg/errors.hpp"

namespace robavg {

namespace {

constexpr int kMaxColumns = 20;

std::vector<int> columns_of_mask(unsigned mask, int offset) {
  std::vector<int> cols;
  for (int j = 0; mask != 0; ++j, mask >>= 1)
    if (mask & 1u) cols.push_back(offset + j);
  return cols;
}

}  // namespace

CandidateSet all_subsets_with_intercept(int p_nonintercept) {
  if (p_nonintercept < 1 || p_nonintercept > kMaxColumns)
    throw TooManyColumnsError("subset enumeration supports 1..20 columns");
  CandidateSet set;
  const unsigned total = 1u << p_nonintercept;
  set.models.reserve(total);
  for (unsigned mask = 0; mask < total; ++mask) {
    CandidateModel m;
    m.id = static_cast<int>(mask);
    m.includes_intercept = true;
    m.columns.push_back(0);
    for (int col : columns_of_mask(mask, 1)) m.columns.push_back(col);
    set.models.push_back(std::move(m));
  }
  set.largest_index = static_cast<int>(total) - 1;
  return set;
}

CandidateSet all_nonempty_subsets(int p) {
  if (p < 1 || p > kMaxColumns)
    throw TooManyColumnsError("subset enumeration supports 1..20 columns");
  CandidateSet set;
  const unsigned total = 1u << p;
  set.models.reserve(total - 1);
  for (unsigned mask = 1; mask < total; ++mask) {
    CandidateModel m;
    m.id = static_cast<int>(mask) - 1;
    m.includes_intercept = false;
    m.columns = columns_of_mask(mask, 0);
    set.models.push_back(std::move(m));
  }
  set.largest_index = set.size() - 1;
  return set;
}

}  // namespace robavg
