#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "mibci/trial.hpp"

namespace mibci {

/// Stratified k-fold partition. Returns k sorted lists of held-out indices
/// that cover [0, labels.size()) exactly once. Each class is shuffled with
/// `seed` and dealt round-robin, so every fold holds floor or ceil of
/// (class count / k) trials of each class. Throws InvalidArgument if a class
/// has fewer than k trials or a label is missing.
std::vector<std::vector<std::size_t>> stratified_folds(std::span<const Label> labels, int k,
                                                       std::uint64_t seed);

/// Complement of a fold in [0, n), sorted.
std::vector<std::size_t> complement(std::span<const std::size_t> fold, std::size_t n);

}  // namespace mibci
