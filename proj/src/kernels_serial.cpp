#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>

#include "psihilfer/errors.hpp"
#include "psihilfer/kernels.hpp"
#include "psihilfer/special_functions.hpp"

namespace psihilfer::kernels {

namespace {

constexpr std::size_t kMaxGaussPoints = 16;

GaussRule make_gauss_legendre(std::size_t points) {
    GaussRule rule;
    rule.nodes.resize(points);
    rule.weights.resize(points);
    const auto n = static_cast<double>(points);
    for (std::size_t i = 0; i < (points + 1) / 2; ++i) {
        double z = std::cos(std::numbers::pi * (static_cast<double>(i) + 0.75) / (n + 0.5));
        double pp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p1 = 1.0;
            double p2 = 0.0;
            for (std::size_t j = 1; j <= points; ++j) {
                const double p3 = p2;
                p2 = p1;
                const auto jd = static_cast<double>(j);
                p1 = ((2.0 * jd - 1.0) * z * p2 - (jd - 1.0) * p3) / jd;
            }
            pp = n * (z * p1 - p2) / (z * z - 1.0);
            const double z_prev = z;
            z = z_prev - p1 / pp;
            if (std::abs(z - z_prev) < 1e-16) break;
        }
        const double w = 1.0 / ((1.0 - z * z) * pp * pp);  // half of 2/(...)
        rule.nodes[i] = 0.5 * (1.0 - z);
        rule.nodes[points - 1 - i] = 0.5 * (1.0 + z);
        rule.weights[i] = w;
        rule.weights[points - 1 - i] = w;
    }
    return rule;
}

/// int_0^1 y^{shift-1} (1 - y/i)^{expo-1} dy as a power series in 1/i:
///   sum_k c_k i^{-k} / (shift + k),  c_0 = 1,  c_{k+1} = c_k (k + 1 - expo) / (k + 1).
double endpoint_series(double expo, double shift, double inv_i) {
    double coef = 1.0;
    double scale = 1.0;
    double sum = 0.0;
    for (int k = 0; k < 400; ++k) {
        const double term = coef * scale / (shift + k);
        sum += term;
        if (std::abs(term) <= 1e-17 * std::abs(sum)) break;
        coef *= (k + 1.0 - expo) / (k + 1.0);
        scale *= inv_i;
        if (coef == 0.0) break;
    }
    return sum;
}

}  // namespace

const GaussRule& gauss_legendre_unit(std::size_t points) {
    static const std::array<GaussRule, kMaxGaussPoints + 1> rules = [] {
        std::array<GaussRule, kMaxGaussPoints + 1> all;
        for (std::size_t p = 1; p <= kMaxGaussPoints; ++p) all[p] = make_gauss_legendre(p);
        return all;
    }();
    if (points == 0 || points > kMaxGaussPoints) {
        throw Error(ErrorKind::ParamViolation, "unsupported Gauss-Legendre point count");
    }
    return rules[points];
}

std::size_t gauss_points_for_distance(std::size_t distance) {
    if (distance <= 1) return 10;
    if (distance <= 3) return 8;
    if (distance <= 15) return 6;
    if (distance <= 63) return 4;
    return 3;
}

double first_difference_power(double p, std::size_t k) {
    if (k == 1) return 1.0;
    const auto kd = static_cast<double>(k);
    return -std::pow(kd, p) * std::expm1(p * std::log1p(-1.0 / kd));
}

double second_difference_power(double p, std::size_t k) {
    if (k == 1) return std::pow(2.0, p) - 2.0;
    const auto kd = static_cast<double>(k);
    return std::pow(kd, p) * (std::expm1(p * std::log1p(1.0 / kd)) + std::expm1(p * std::log1p(-1.0 / kd)));
}

AbelMoments abel_moments(double beta, std::size_t n) {
    AbelMoments m;
    m.near.assign(n + 1, 0.0);
    m.far.assign(n + 1, 0.0);
    if (n == 0) return m;
    m.near[1] = 1.0 / (beta * (beta + 1.0));
    m.far[1] = 1.0 / (beta + 1.0);
    for (std::size_t k = 2; k <= n; ++k) {
        const GaussRule& rule = gauss_legendre_unit(gauss_points_for_distance(k - 1));
        const auto lo = static_cast<double>(k - 1);
        double near = 0.0;
        double far = 0.0;
        for (std::size_t q = 0; q < rule.nodes.size(); ++q) {
            const double frac = rule.nodes[q];
            const double kernel = rule.weights[q] * std::pow(lo + frac, beta - 1.0);
            near += kernel * (1.0 - frac);
            far += kernel * frac;
        }
        m.near[k] = near;
        m.far[k] = far;
    }
    return m;
}

ToeplitzWeights abel_toeplitz(const AbelMoments& moments, std::span<const double> panel_factor, double scale) {
    const std::size_t n = moments.near.size() - 1;
    auto factor = [&](std::size_t k) { return panel_factor.empty() ? 1.0 : panel_factor[k]; };
    ToeplitzWeights weights;
    weights.interior.assign(n, 0.0);
    weights.boundary.assign(n + 1, 0.0);
    if (n == 0) return weights;
    weights.interior[0] = scale * factor(1) * moments.near[1];
    for (std::size_t k = 1; k < n; ++k) {
        weights.interior[k] = scale * (factor(k) * moments.far[k] + factor(k + 1) * moments.near[k + 1]);
    }
    for (std::size_t i = 1; i <= n; ++i) weights.boundary[i] = scale * factor(i) * moments.far[i];
    return weights;
}

void weighted_row_unit(double beta, double zeta, std::size_t i, std::span<double> row) {
    std::fill(row.begin(), row.end(), 0.0);
    if (i == 0) return;
    const auto id = static_cast<double>(i);
    if (i == 1) {
        const double m0 = std::exp(log_gamma(zeta) + log_gamma(beta) - log_gamma(zeta + beta));
        const double m1 = std::exp(log_gamma(zeta + 1.0) + log_gamma(beta) - log_gamma(zeta + beta + 1.0));
        row[0] = m0 - m1;
        row[1] = m1;
        return;
    }
    const double inv_i = 1.0 / id;

    // Panel [0, 1]: x^{zeta-1} exact, (i - x)^{beta-1} expanded in x / i.
    {
        const double pre = std::pow(id, beta - 1.0);
        const double m0 = pre * endpoint_series(beta, zeta, inv_i);
        const double m1 = pre * endpoint_series(beta, zeta + 1.0, inv_i);
        row[0] += m0 - m1;
        row[1] += m1;
    }
    // Panel [i-1, i]: (i - x)^{beta-1} exact, x^{zeta-1} expanded in (i - x) / i.
    {
        const double pre = std::pow(id, zeta - 1.0);
        const double m0 = pre * endpoint_series(zeta, beta, inv_i);
        const double toward_end = pre * endpoint_series(zeta, beta + 1.0, inv_i);
        const double m1 = m0 - toward_end;
        row[i - 1] += m0 - m1;
        row[i] += m1;
    }
    // Interior panels are smooth; Gauss-Legendre sized by singularity distance.
    for (std::size_t p = 1; p + 1 < i; ++p) {
        const std::size_t distance = std::min(p, i - 1 - p);
        const GaussRule& rule = gauss_legendre_unit(gauss_points_for_distance(distance));
        const auto lo = static_cast<double>(p);
        double m0 = 0.0;
        double m1 = 0.0;
        for (std::size_t q = 0; q < rule.nodes.size(); ++q) {
            const double frac = rule.nodes[q];
            const double x = lo + frac;
            const double kernel =
                rule.weights[q] * std::exp((beta - 1.0) * std::log(id - x) + (zeta - 1.0) * std::log(x));
            m0 += kernel;
            m1 += kernel * frac;
        }
        row[p] += m0 - m1;
        row[p + 1] += m1;
    }
}

void build_weighted_table_serial(double beta, double zeta, double h, TriangularTable& table) {
    const double scale = std::pow(h, beta + zeta - 1.0) / gamma_fn(beta);
    for (std::size_t i = 0; i <= table.n(); ++i) {
        auto row = table.row(i);
        weighted_row_unit(beta, zeta, i, row);
        for (double& v : row) v *= scale;
    }
}

void apply_table_serial(const TriangularTable& table, std::span<const double> x, std::span<double> out) {
    for (std::size_t i = 0; i <= table.n(); ++i) {
        const auto row = table.row(i);
        double acc = 0.0;
        for (std::size_t j = 0; j <= i; ++j) acc += row[j] * x[j];
        out[i] = acc;
    }
}

void apply_toeplitz_serial(const ToeplitzWeights& weights, std::span<const double> x, std::span<double> out) {
    const std::size_t n = x.size() - 1;
    out[0] = 0.0;
    for (std::size_t i = 1; i <= n; ++i) {
        double acc = 0.0;
        for (std::size_t k = 0; k < i; ++k) acc += weights.interior[k] * x[i - k];
        out[i] = acc + weights.boundary[i] * x[0];
    }
}

}  // namespace psihilfer::kernels
