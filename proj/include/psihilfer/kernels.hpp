#pragma once

// Quadrature kernels behind frac_ops and linear_forms.
//
// Every kernel comes in two flavours: a serial reference (`*_serial`) and an
// OpenMP version (`*_omp`) that distributes target nodes across threads. Each
// target node accumulates its own sum in fixed index order, so the two produce
// bit-identical results for any thread count.

#include <cstddef>
#include <span>
#include <vector>

namespace psihilfer::kernels {

enum class Execution { serial, parallel };

/// Lower-triangular, row-major weight table: row i holds i + 1 weights.
class TriangularTable {
public:
    TriangularTable() = default;
    explicit TriangularTable(std::size_t n) : n_(n), data_((n + 1) * (n + 2) / 2, 0.0) {}

    std::size_t n() const { return n_; }
    std::span<double> row(std::size_t i) { return {data_.data() + offset(i), i + 1}; }
    std::span<const double> row(std::size_t i) const { return {data_.data() + offset(i), i + 1}; }

private:
    static std::size_t offset(std::size_t i) { return i * (i + 1) / 2; }
    std::size_t n_ = 0;
    std::vector<double> data_;
};

/// Causal Toeplitz operator with a separate weight for node 0:
///   out_0 = 0,  out_i = sum_{k=0}^{i-1} interior[k] x[i-k] + boundary[i] x[0].
struct ToeplitzWeights {
    std::vector<double> interior;  // size n
    std::vector<double> boundary;  // size n + 1, boundary[0] unused
};

/// Gauss-Legendre rule on [0, 1].
struct GaussRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};
const GaussRule& gauss_legendre_unit(std::size_t points);

/// Number of Gauss points that resolves an integrand on a unit panel whose
/// nearest endpoint singularity lies `distance` panels away (distance >= 1).
std::size_t gauss_points_for_distance(std::size_t distance);

/// Unit-spacing Abel panel moments for r^{beta-1} on [k-1, k], k = 1..n:
///   near[k] = int r^{beta-1} (k - r) dr,  far[k] = int r^{beta-1} (r - k + 1) dr.
/// Index 0 is unused.
struct AbelMoments {
    std::vector<double> near;
    std::vector<double> far;
};
AbelMoments abel_moments(double beta, std::size_t n);

/// Product-trapezoid Toeplitz weights from Abel moments. `panel_factor[k]`
/// (k = 1..n) multiplies every moment of the panel at distance k; an empty
/// span means 1. All weights are multiplied by `scale`.
ToeplitzWeights abel_toeplitz(const AbelMoments& moments, std::span<const double> panel_factor, double scale);

/// Row weights for int_0^{x_i} (x_i - s)^{beta-1} s^{zeta-1} w(s) ds / Gamma(beta)
/// with w piecewise linear on the uniform grid of spacing h. Both endpoint
/// singularities are integrated exactly per panel; the result is the plain
/// integral value at every node.
void build_weighted_table_serial(double beta, double zeta, double h, TriangularTable& table);
void build_weighted_table_omp(double beta, double zeta, double h, TriangularTable& table);

/// Row i of the unscaled (unit spacing, no 1/Gamma) weighted table.
void weighted_row_unit(double beta, double zeta, std::size_t i, std::span<double> row);

void apply_table_serial(const TriangularTable& table, std::span<const double> x, std::span<double> out);
void apply_table_omp(const TriangularTable& table, std::span<const double> x, std::span<double> out);

void apply_toeplitz_serial(const ToeplitzWeights& weights, std::span<const double> x, std::span<double> out);
void apply_toeplitz_omp(const ToeplitzWeights& weights, std::span<const double> x, std::span<double> out);

inline void apply_table(Execution exec, const TriangularTable& table, std::span<const double> x,
                        std::span<double> out) {
    exec == Execution::serial ? apply_table_serial(table, x, out) : apply_table_omp(table, x, out);
}

inline void apply_toeplitz(Execution exec, const ToeplitzWeights& weights, std::span<const double> x,
                           std::span<double> out) {
    exec == Execution::serial ? apply_toeplitz_serial(weights, x, out) : apply_toeplitz_omp(weights, x, out);
}

inline void build_weighted_table(Execution exec, double beta, double zeta, double h, TriangularTable& table) {
    exec == Execution::serial ? build_weighted_table_serial(beta, zeta, h, table)
                              : build_weighted_table_omp(beta, zeta, h, table);
}

/// (k+1)^p - 2 k^p + (k-1)^p for k >= 1 without cancellation of the leading terms.
double second_difference_power(double p, std::size_t k);
/// k^p - (k-1)^p for k >= 1.
double first_difference_power(double p, std::size_t k);

}  // namespace psihilfer::kernels
