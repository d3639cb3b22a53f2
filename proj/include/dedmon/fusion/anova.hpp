#pragma once

#include <limits>
#include <span>
#include <string>
#include <vector>

#include "dedmon/fusion/table.hpp"

namespace dedmon::fusion {

/// One-way ANOVA of a single feature across class groups.
struct AnovaStat {
    double f = 0.0;  // +inf when within-group variance vanishes but between does not
    double p = 1.0;
    double ssb = 0.0;
    double ssw = 0.0;
    double sst = 0.0;
    int groups = 0;
    std::vector<std::size_t> group_sizes;
    std::size_t total = 0;
};

/// Groups are given as non-negative integer codes; empty codes are ignored.
/// Throws InvalidGrouping when fewer than two groups exist, any group has
/// fewer than two members, or N <= k.
AnovaStat one_way_anova(std::span<const double> values, std::span<const int> groups);

AnovaStat anova_f(const FeatureTable& table, const std::string& feature);

/// Regularized incomplete beta I_x(a, b), continued fraction to 1e-12.
double regularized_incomplete_beta(double a, double b, double x);

/// Upper tail P(F > f) of the F distribution with (d1, d2) degrees of freedom.
double f_survival(double f, double d1, double d2);

struct FeatureScore {
    std::string feature;
    Modality modality = Modality::Other;
    double f = 0.0;
    double p = 1.0;
};

/// Scores every AE and vision column, sorted by F descending then name.
std::vector<FeatureScore> rank_features(const FeatureTable& table);

/// Top features per modality by F (ties by name), AE block first. Requests
/// beyond the available count are clamped with a warning.
std::vector<std::string> select_top_features(const std::vector<FeatureScore>& scores, std::size_t top_k_ae,
                                             std::size_t top_k_vision);

}  // namespace dedmon::fusion
