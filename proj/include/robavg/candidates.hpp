#ifndef ROBAVG_CANDIDATES_HPP
#define ROBAVG_CANDIDATES_HPP

#include <vector>

namespace robavg {

/// One candidate submodel: a strictly increasing column subset of the full
/// design matrix.
struct CandidateModel {
  int id = 0;
  std::vector<int> columns;
  bool includes_intercept = false;

  int k() const { return static_cast<int>(columns.size()); }
};

struct CandidateSet {
  std::vector<CandidateModel> models;
  int largest_index = 0;  // the unique model containing every column

  int size() const { return static_cast<int>(models.size()); }
  const CandidateModel& largest() const { return models[largest_index]; }
};

/// All 2^p subsets of the non-intercept columns {1..p}, each with column 0
/// (the intercept) prepended. The final model is the full one.
CandidateSet all_subsets_with_intercept(int p_nonintercept);

/// All 2^p - 1 non-empty subsets of columns {0..p-1}; no intercept mandated.
CandidateSet all_nonempty_subsets(int p);

}  // namespace robavg

#endif  // ROBAVG_CANDIDATES_HPP
