#include <omp.h>

#include <cmath>
#include <cstdint>

#include "psihilfer/kernels.hpp"
#include "psihilfer/special_functions.hpp"

namespace psihilfer::kernels {

// Rows grow linearly in length, so dynamic scheduling keeps threads balanced.
// Each row's sum is private to one thread and runs in index order.

void build_weighted_table_omp(double beta, double zeta, double h, TriangularTable& table) {
    const double scale = std::pow(h, beta + zeta - 1.0) / gamma_fn(beta);
    const auto rows = static_cast<std::int64_t>(table.n()) + 1;
    // Warm the static Gauss rule table before entering the parallel region.
    (void)gauss_legendre_unit(1);
#pragma omp parallel for schedule(dynamic, 16)
    for (std::int64_t i = 0; i < rows; ++i) {
        auto row = table.row(static_cast<std::size_t>(i));
        weighted_row_unit(beta, zeta, static_cast<std::size_t>(i), row);
        for (double& v : row) v *= scale;
    }
}

void apply_table_omp(const TriangularTable& table, std::span<const double> x, std::span<double> out) {
    const auto rows = static_cast<std::int64_t>(table.n()) + 1;
#pragma omp parallel for schedule(dynamic, 32)
    for (std::int64_t ii = 0; ii < rows; ++ii) {
        const auto i = static_cast<std::size_t>(ii);
        const auto row = table.row(i);
        double acc = 0.0;
        for (std::size_t j = 0; j <= i; ++j) acc += row[j] * x[j];
        out[i] = acc;
    }
}

void apply_toeplitz_omp(const ToeplitzWeights& weights, std::span<const double> x, std::span<double> out) {
    const auto n = static_cast<std::int64_t>(x.size()) - 1;
    out[0] = 0.0;
#pragma omp parallel for schedule(dynamic, 32)
    for (std::int64_t ii = 1; ii <= n; ++ii) {
        const auto i = static_cast<std::size_t>(ii);
        double acc = 0.0;
        for (std::size_t k = 0; k < i; ++k) acc += weights.interior[k] * x[i - k];
        out[i] = acc + weights.boundary[i] * x[0];
    }
}

}  // namespace psihilfer::kernels
