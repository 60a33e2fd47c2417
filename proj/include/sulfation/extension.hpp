#pragma once

#include <vector>

#include "sulfation/geometry.hpp"

namespace sulfation {

/// Precomputed steady upwind transport n . grad u = 0 from known nodes into a
/// set of target nodes. Targets are visited in order of increasing phi so each
/// one reads only known nodes or targets already filled.
class ExtensionPlan {
 public:
  ExtensionPlan() = default;
  ExtensionPlan(const LevelSetField& phi, const std::vector<char>& known, const std::vector<std::size_t>& targets);

  /// `values` is a full-lattice array; entries at targets are overwritten.
  void apply(std::vector<double>& values) const;
  std::size_t size() const { return targets_.size(); }

 private:
  struct Source {
    std::size_t node;
    double weight;
  };
  std::vector<std::size_t> targets_;
  std::vector<std::size_t> offsets_;  // sources of target k are [offsets_[k], offsets_[k+1])
  std::vector<Source> sources_;
};

/// Inactive nodes within Chebyshev distance `width` of an active node.
std::vector<std::size_t> inactive_band(const DomainClassification& cls, int width);

}  // namespace sulfation
