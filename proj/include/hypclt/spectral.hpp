#pragma once

/*
 * Perron-Frobenius data of an almost semisimple digraph.
 *
 * rho(v) is the projection of v onto the right lambda-eigenspace along the
 * range of M - lambda I, and ell(v) the same for M^T. With K and L bases of the
 * right and left kernels of M - lambda I the projector is K (L^T K)^-1 L^T.
 * Scalar is double (kernels from an SVD) or Rational (exact elimination, which
 * needs an integral lambda).
 */

#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/SVD>

#include "hypclt/digraph.hpp"
#include "hypclt/group.hpp"
#include "hypclt/linalg.hpp"

namespace hypclt {

template <class T = double>
DenseMatrix<T> transition_matrix(const LabeledDigraph& g) {
    DenseMatrix<T> m(g.vertex_count(), g.vertex_count());
    for (const auto& e : g.edges()) m(e.source, e.target) += T(1);
    return m;
}

/// Largest component Perron root; 0 when the digraph has no cycles.
inline double perron(const LabeledDigraph& g) {
    double lambda = 0;
    for (double x : g.components().xi) lambda = std::max(lambda, x);
    return lambda;
}

struct SupportReport {
    std::vector<std::size_t> lambda_components;
    std::vector<std::size_t> support;  ///< vertices of the lambda-components
    std::optional<std::pair<std::size_t, std::size_t>> violation;  ///< connected lambda-components
    bool almost_semisimple() const { return !violation; }
};

inline SupportReport support_analysis(const ComponentDecomposition& d, double lambda, double tie_tolerance = 1e-9) {
    SupportReport r;
    for (std::size_t c = 0; c < d.xi.size(); ++c)
        if (std::abs(d.xi[c] - lambda) <= tie_tolerance * lambda) r.lambda_components.push_back(c);
    for (auto a : r.lambda_components) {
        for (auto v : d.components[a]) r.support.push_back(v);
        for (auto b : r.lambda_components)
            if (a != b && d.reaches(a, b) && !r.violation) r.violation = std::pair{a, b};
    }
    std::sort(r.support.begin(), r.support.end());
    return r;
}

struct SpectralOptions {
    double tie_tolerance = 1e-9;
    double kernel_tolerance = 1e-8;  ///< relative bound on the singular values spanning the kernel
};

template <class T = double>
struct SpectralData {
    LabeledDigraph digraph;
    DenseMatrix<T> M;
    double lambda_value = 0;  ///< Perron root as a double
    T lambda{};               ///< Perron root in the working scalar
    ComponentDecomposition components;
    SupportReport support;
    SemisimplicityVerdict verdict = SemisimplicityVerdict::pass;
    SpectralOptions options;

    // empty unless verdict == pass
    DenseMatrix<T> projector;
    std::vector<T> rho_one;
    std::vector<T> ell_v1;
    DenseMatrix<T> N;
    std::vector<T> mu;

    bool ok() const { return verdict == SemisimplicityVerdict::pass; }

    std::vector<T> rho(const std::vector<T>& v) const { return projector * v; }
    std::vector<T> ell(const std::vector<T>& v) const { return projector.transpose() * v; }

    /// n^-1 sum_{i<n} lambda^-i M^i v, the Cesaro form of rho(v).
    std::vector<T> rho_cesaro(std::vector<T> v, int n) const {
        std::vector<T> acc(v.size(), T(0));
        for (int i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < v.size(); ++j) acc[j] += v[j];
            v = M * v;
            for (auto& x : v) x /= lambda;
        }
        for (auto& x : acc) x /= T(n);
        return acc;
    }
};

namespace detail {

template <class T>
void compute_projector(SpectralData<T>& s) {
    const std::size_t n = s.M.rows();
    const std::size_t k = s.support.lambda_components.size();
    DenseMatrix<T> A = s.M;
    for (std::size_t i = 0; i < n; ++i) A(i, i) -= s.lambda;
    DenseMatrix<T> K(n, k), L(n, k);
    if constexpr (std::is_floating_point_v<T>) {
        Eigen::JacobiSVD<Eigen::MatrixXd> svd(to_eigen(A), Eigen::ComputeFullU | Eigen::ComputeFullV);
        const auto& sv = svd.singularValues();
        const double scale = std::max(1.0, sv(0));
        if (sv(n - k) > s.options.kernel_tolerance * scale)
            throw DegenerateEigenstructure("lambda-eigenspace has dimension below the number of lambda-components");
        if (k < n && sv(n - k - 1) <= s.options.kernel_tolerance * scale)
            throw DegenerateEigenstructure("lambda-eigenspace is larger than the number of lambda-components");
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < k; ++j) {
                K(i, j) = svd.matrixV()(i, n - k + j);
                L(i, j) = svd.matrixU()(i, n - k + j);
            }
    } else {
        const auto right = exact_null_space(A);
        const auto left = exact_null_space(A.transpose());
        if (right.size() != k || left.size() != k)
            throw DegenerateEigenstructure("exact kernel dimension differs from the number of lambda-components");
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < k; ++j) {
                K(i, j) = right[j][i];
                L(i, j) = left[j][i];
            }
    }
    const auto LtK = L.transpose() * K;
    const auto inv = invert(LtK);
    if (!inv) throw DegenerateEigenstructure("L^T K is singular; lambda is not semisimple");
    s.projector = K * (*inv) * L.transpose();
}

}  // namespace detail

/// Full analysis. Inputs that are not almost semisimple get a verdict and no projections.
template <class T = double>
SpectralData<T> analyze(const LabeledDigraph& g, const SpectralOptions& options = {}) {
    SpectralData<T> s;
    s.digraph = g;
    s.options = options;
    s.M = transition_matrix<T>(g);
    s.components = g.components();
    for (double x : s.components.xi) s.lambda_value = std::max(s.lambda_value, x);
    if constexpr (std::is_floating_point_v<T>) {
        s.lambda = s.lambda_value;
    } else {
        const double r = std::round(s.lambda_value);
        if (std::abs(r - s.lambda_value) > 1e-9 * std::max(1.0, r)) throw IrrationalPerronRoot(s.lambda_value);
        s.lambda = T(static_cast<long long>(r));
        s.lambda_value = r;
    }
    s.support = support_analysis(s.components, s.lambda_value, options.tie_tolerance);
    if (s.lambda_value <= 1.0 + options.tie_tolerance) {
        s.verdict = SemisimplicityVerdict::lambda_not_above_one;
        return s;
    }
    if (!s.support.almost_semisimple()) {
        s.verdict = SemisimplicityVerdict::not_almost_semisimple;
        return s;
    }
    detail::compute_projector(s);
    const std::size_t n = g.vertex_count();
    s.rho_one = s.rho(std::vector<T>(n, T(1)));
    std::vector<T> e1(n, T(0));
    e1[0] = T(1);
    s.ell_v1 = s.ell(e1);
    // rho(1) lives on vertices that reach the support, ell(v1) on vertices reached
    // from it; zero the rest so round-off cannot leak into N.
    if constexpr (std::is_floating_point_v<T>) {
        std::vector<char> up(n, 0), down(n, 0);
        for (auto v : s.support.support) up[v] = down[v] = 1;
        for (bool changed = true; changed;) {
            changed = false;
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t j = 0; j < n; ++j) {
                    if (s.M(i, j) == T(0)) continue;
                    if (up[j] && !up[i]) up[i] = changed = true;
                    if (down[i] && !down[j]) down[j] = changed = true;
                }
        }
        for (std::size_t i = 0; i < n; ++i) {
            if (!up[i]) s.rho_one[i] = 0;
            if (!down[i]) s.ell_v1[i] = 0;
        }
    }
    s.N = DenseMatrix<T>(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        if (s.rho_one[i] == T(0)) {
            s.N(i, i) = T(1);
            continue;
        }
        for (std::size_t j = 0; j < n; ++j)
            if (s.M(i, j) != T(0)) s.N(i, j) = s.M(i, j) * s.rho_one[j] / (s.lambda * s.rho_one[i]);
    }
    s.mu.assign(n, T(0));
    T total(0);
    for (std::size_t i = 0; i < n; ++i) {
        s.mu[i] = s.rho_one[i] * s.ell_v1[i];
        total += s.mu[i];
    }
    if (total == T(0)) throw DegenerateEigenstructure("stationary measure has zero mass");
    for (auto& x : s.mu) x /= total;
    return s;
}

/// lambda^-n rho(1) at the end vertex of an accepted word.
template <class T>
T cone_weight(const SpectralData<T>& s, const Word& w) {
    const auto r = s.digraph.accept(w);
    if (!r) throw NotAccepted(format_word(r.path.labels, s.digraph.alphabet()), r.halt_index);
    T weight = s.rho_one[r.path.vertices.back()];
    for (std::size_t i = 0; i < w.size(); ++i) weight /= s.lambda;
    return weight;
}

struct PoincareDiagnostics {
    double lambda = 0;
    std::vector<std::size_t> sphere_sizes;
    std::vector<double> terms;         ///< |G_n| lambda^-n
    std::vector<double> partial_sums;  ///< sum_{m<=n} |G_m| lambda^-m
    double critical_exponent = 0;      ///< log lambda
};

/// Growth table of the ball; lambda from the last sphere ratio unless given.
inline PoincareDiagnostics poincare_diagnostics(const GroupOracle& oracle, const std::string& genset, int radius,
                                                std::optional<double> lambda = std::nullopt) {
    const Ball ball = oracle.ball(genset, radius);
    PoincareDiagnostics p;
    for (int n = 0; n <= radius; ++n) p.sphere_sizes.push_back(ball.sphere_size(n));
    if (lambda) {
        p.lambda = *lambda;
    } else if (radius >= 1 && p.sphere_sizes[radius - 1] > 0) {
        p.lambda = double(p.sphere_sizes[radius]) / double(p.sphere_sizes[radius - 1]);
    } else {
        p.lambda = 1.0;
    }
    double sum = 0;
    for (int n = 0; n <= radius; ++n) {
        const double term = double(p.sphere_sizes[n]) * std::pow(p.lambda, -n);
        p.terms.push_back(term);
        sum += term;
        p.partial_sums.push_back(sum);
    }
    p.critical_exponent = std::log(p.lambda);
    return p;
}

}  // namespace hypclt
