#include "mibci/folds.hpp"

#include <algorithm>
#include <random>
#include <string>

#include "mibci/error.hpp"

namespace mibci {

std::vector<std::vector<std::size_t>> stratified_folds(std::span<const Label> labels, int k,
                                                       std::uint64_t seed) {
    if (k < 2) throw InvalidArgument("cross-validation needs at least 2 folds");
    std::vector<std::size_t> neg, pos;
    for (std::size_t i = 0; i < labels.size(); ++i) {
        if (labels[i] == Label::kNeg) {
            neg.push_back(i);
        } else if (labels[i] == Label::kPos) {
            pos.push_back(i);
        } else {
            throw InvalidArgument("cross-validation needs labeled trials");
        }
    }
    const auto per_class = static_cast<std::size_t>(k);
    if (neg.size() < per_class || pos.size() < per_class) {
        throw InvalidArgument("cannot build " + std::to_string(k) + " stratified folds from " +
                              std::to_string(neg.size()) + " / " + std::to_string(pos.size()) +
                              " trials per class");
    }

    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      0x5f0c1dU};
    std::mt19937_64 rng(seq);
    std::shuffle(neg.begin(), neg.end(), rng);
    std::shuffle(pos.begin(), pos.end(), rng);

    std::vector<std::vector<std::size_t>> folds(per_class);
    std::size_t at = 0;
    for (const auto* cls : {&neg, &pos}) {
        for (std::size_t i : *cls) {
            folds[at % per_class].push_back(i);
            ++at;
        }
    }
    for (auto& f : folds) std::sort(f.begin(), f.end());
    return folds;
}

std::vector<std::size_t> complement(std::span<const std::size_t> fold, std::size_t n) {
    std::vector<std::size_t> out;
    out.reserve(n - fold.size());
    std::size_t j = 0;
    for (std::size_t i = 0; i < n; ++i) {
        if (j < fold.size() && fold[j] == i) {
            ++j;
        } else {
            out.push_back(i);
        }
    }
    return out;
}

}  // namespace mibci
