#pragma once

#include <Eigen/Dense>
#include <vector>

#include "kpcanet/core.hpp"
#include "kpcanet/patches.hpp"

namespace kpcanet {

// The ten kernel functions, as published. Two deviations from the printed
// table are deliberate and documented in the README:
//   - Exponential uses the UNSQUARED norm, exp(-||x-y||/(2 sigma^2)), as
//     printed (not the conventional exponential kernel).
//   - RationalQuadratic keeps the printed outer exp, so k(x,x) = e.
//   - Circular's printed formula is not well-defined; the standard circular
//     kernel (2/pi)(acos(u) - u sqrt(1-u^2)), u = ||x-y||/sigma, is used,
//     with the printed "0 otherwise" branch.

/// k(x,y) with spec's parameters. Exactly symmetric in x and y (the same
/// floating sequence is evaluated for both argument orders).
double eval(const KernelSpec &spec, const double *x, const double *y, int n);
double eval(const KernelSpec &spec, const std::vector<double> &x, const std::vector<double> &y);

/// count x count matrix of pairwise kernel values; entries computed once
/// per unordered pair and mirrored, so the result is exactly symmetric.
Eigen::MatrixXd gram(const KernelSpec &spec, const PatchMatrix &points);

/// basis.count x queries.count matrix of kernel values k(basis_p, query_q).
/// Entries are bit-identical to eval() on the same pair.
Eigen::MatrixXd cross_gram(const KernelSpec &spec, const PatchMatrix &basis,
                           const PatchMatrix &queries);

}  // namespace kpcanet
