#pragma once

// Drift and variance of vertex weights along the stationary chain, exact
// moments, seeded sampling, empirical CLT checks, typicality profiles and the
// comparison of word lengths in two generating sets.

#include <algorithm>
#include <atomic>
#include <mutex>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <optional>
#include <random>
#include <string>
#include <thread>
#include <vector>

#include "hypclt/combable.hpp"
#include "hypclt/spectral.hpp"

namespace hypclt {

template <class T = double>
struct ComponentStatistics {
    std::size_t component = 0;
    std::vector<std::size_t> vertices;
    T E{};
    T sigma2{};
    double sigma = 0;
    std::vector<T> poisson_solution;  ///< g on the component's vertices
};

template <class T = double>
struct CltReport {
    std::vector<ComponentStatistics<T>> per_component;
    T E{};
    T sigma2{};
    double sigma = 0;
    bool components_agree = true;
    double agreement_tolerance = 1e-8;
    std::vector<std::string> warnings;
};

template <class T>
CltReport<T> drift_variance(const SpectralData<T>& s, const std::vector<std::int64_t>& dphi,
                            double agreement_tolerance = 1e-8, double clamp = 1e-10) {
    if (!s.ok()) throw NotAlmostSemisimple(std::string("digraph verdict: ") + to_string(s.verdict));
    if (dphi.size() != s.digraph.vertex_count()) throw MismatchedDigraph();
    CltReport<T> r;
    r.agreement_tolerance = agreement_tolerance;
    for (auto c : s.support.lambda_components) {
        ComponentStatistics<T> cs;
        cs.component = c;
        cs.vertices = s.components.components[c];
        const std::size_t k = cs.vertices.size();
        std::vector<T> mu(k), f(k);
        T mass(0);
        for (std::size_t a = 0; a < k; ++a) {
            mu[a] = s.mu[cs.vertices[a]];
            mass += mu[a];
        }
        if (mass == T(0)) throw SingularPoisson("component carries no stationary mass");
        for (auto& x : mu) x /= mass;
        T E(0);
        for (std::size_t a = 0; a < k; ++a) E += mu[a] * T(dphi[cs.vertices[a]]);
        for (std::size_t a = 0; a < k; ++a) f[a] = T(dphi[cs.vertices[a]]) - E;
        DenseMatrix<T> A(k, k);
        for (std::size_t a = 0; a < k; ++a)
            for (std::size_t b = 0; b < k; ++b)
                A(a, b) = (a == b ? T(1) : T(0)) - s.N(cs.vertices[a], cs.vertices[b]) + mu[b];
        auto g = solve_square(A, f);
        if (!g) throw SingularPoisson("I - N + 1 mu^T is singular on the component");
        T cross(0), square(0);
        for (std::size_t a = 0; a < k; ++a) {
            cross += mu[a] * f[a] * (*g)[a];
            square += mu[a] * f[a] * f[a];
        }
        T sigma2 = T(2) * cross - square;
        const double v = to_double(sigma2);
        if (v < 0) {
            if (-v > clamp) throw NegativeVariance(v);
            r.warnings.push_back("clamped variance " + std::to_string(v) + " to 0");
            sigma2 = T(0);
        }
        cs.E = E;
        cs.sigma2 = sigma2;
        cs.sigma = std::sqrt(to_double(sigma2));
        cs.poisson_solution = std::move(*g);
        r.per_component.push_back(std::move(cs));
    }
    if (r.per_component.empty()) throw NotAlmostSemisimple("no lambda-components");
    r.E = r.per_component[0].E;
    r.sigma2 = r.per_component[0].sigma2;
    r.sigma = r.per_component[0].sigma;
    for (const auto& cs : r.per_component) {
        if (std::abs(to_double(cs.E) - to_double(r.E)) > agreement_tolerance ||
            std::abs(cs.sigma - r.sigma) > agreement_tolerance)
            r.components_agree = false;
    }
    return r;
}

template <class T>
CltReport<T> drift_variance(const SpectralData<T>& s, const CombableFunction& f, double agreement_tolerance = 1e-8) {
    if (!(f.combing.digraph == s.digraph)) throw MismatchedDigraph();
    return drift_variance(s, f.dphi, agreement_tolerance);
}

template <class T = double>
struct Moments {
    int n = 0;
    T mean{};
    T variance{};
};

/// Exact mean and variance of sum_{i=0..n} dphi(gamma(i)) for the chain started at v1.
template <class T>
Moments<T> moment_oracle(const SpectralData<T>& s, const std::vector<std::int64_t>& dphi, int n) {
    if (!s.ok()) throw NotAlmostSemisimple(std::string("digraph verdict: ") + to_string(s.verdict));
    const std::size_t V = s.digraph.vertex_count();
    std::vector<T> p(V, T(0)), s1(V, T(0)), s2(V, T(0));
    const T d0 = T(dphi[0]);
    p[0] = T(1);
    s1[0] = d0;
    s2[0] = d0 * d0;
    std::vector<std::vector<std::pair<std::size_t, T>>> rows(V);
    for (std::size_t i = 0; i < V; ++i)
        for (std::size_t j = 0; j < V; ++j)
            if (s.N(i, j) != T(0)) rows[i].emplace_back(j, s.N(i, j));
    for (int step = 0; step < n; ++step) {
        std::vector<T> p2(V, T(0)), a2(V, T(0)), b2(V, T(0));
        for (std::size_t i = 0; i < V; ++i) {
            if (p[i] == T(0)) continue;
            for (const auto& [j, w] : rows[i]) {
                const T d = T(dphi[j]);
                p2[j] += w * p[i];
                a2[j] += w * (s1[i] + d * p[i]);
                b2[j] += w * (s2[i] + T(2) * d * s1[i] + d * d * p[i]);
            }
        }
        p = std::move(p2);
        s1 = std::move(a2);
        s2 = std::move(b2);
    }
    Moments<T> m;
    m.n = n;
    T first(0), second(0);
    for (std::size_t i = 0; i < V; ++i) {
        first += s1[i];
        second += s2[i];
    }
    m.mean = first;
    m.variance = second - first * first;
    return m;
}

struct SampleBatch {
    int n = 0;
    std::size_t count = 0;
    std::uint64_t seed = 0;
    std::vector<Word> words;  ///< kept only on request
    std::vector<std::size_t> end_vertices;
    std::vector<std::int64_t> phi_values;  ///< empty without weights
};

struct SampleOptions {
    bool keep_words = false;
    unsigned threads = 0;  ///< 0 = hardware concurrency
    std::size_t chunk = 1024;
};

/// Runs the chain N from v1 for n steps, count times. Chunk c of the samples
/// uses its own generator seeded at seed + c * 0x9E3779B97F4A7C15, so the batch
/// does not depend on the thread count.
template <class T>
SampleBatch sample(const SpectralData<T>& s, int n, std::size_t count, std::uint64_t seed,
                   const std::vector<std::int64_t>* dphi = nullptr, const SampleOptions& options = {}) {
    if (!s.ok()) throw NotAlmostSemisimple(std::string("digraph verdict: ") + to_string(s.verdict));
    const auto& g = s.digraph;
    const std::size_t V = g.vertex_count();
    std::vector<std::vector<std::size_t>> edges(V);
    std::vector<std::discrete_distribution<std::size_t>> pick(V);
    for (std::size_t v = 0; v < V; ++v) {
        std::vector<double> w;
        for (auto ei : g.out_edges(v)) {
            const double weight = to_double(s.rho_one[g.edges()[ei].target]);
            if (weight > 0) {
                edges[v].push_back(ei);
                w.push_back(weight);
            }
        }
        if (!w.empty()) pick[v] = std::discrete_distribution<std::size_t>(w.begin(), w.end());
    }
    SampleBatch batch;
    batch.n = n;
    batch.count = count;
    batch.seed = seed;
    batch.end_vertices.assign(count, 0);
    if (dphi) batch.phi_values.assign(count, 0);
    if (options.keep_words) batch.words.assign(count, {});
    const std::size_t chunks = (count + options.chunk - 1) / options.chunk;
    std::atomic<std::size_t> next_chunk{0};
    std::atomic<bool> failed{false};
    std::size_t dead_vertex = 0;
    std::mutex failure_mutex;
    auto worker = [&]() {
        auto local = pick;
        for (;;) {
            const std::size_t c = next_chunk.fetch_add(1);
            if (c >= chunks || failed) return;
            std::mt19937_64 rng(seed + c * 0x9E3779B97F4A7C15ULL);
            const std::size_t end = std::min(count, (c + 1) * options.chunk);
            for (std::size_t i = c * options.chunk; i < end; ++i) {
                std::size_t v = 0;
                std::int64_t total = dphi ? (*dphi)[0] : 0;
                Word w;
                for (int step = 0; step < n; ++step) {
                    if (edges[v].empty()) {
                        std::lock_guard lock(failure_mutex);
                        failed = true;
                        dead_vertex = v;
                        return;
                    }
                    const auto& e = g.edges()[edges[v][local[v](rng)]];
                    v = e.target;
                    if (dphi) total += (*dphi)[v];
                    if (options.keep_words) w.push_back(e.label);
                }
                batch.end_vertices[i] = v;
                if (dphi) batch.phi_values[i] = total;
                if (options.keep_words) batch.words[i] = std::move(w);
            }
        }
    };
    unsigned threads = options.threads ? options.threads : std::max(1u, std::thread::hardware_concurrency());
    threads = unsigned(std::min<std::size_t>(threads, std::max<std::size_t>(chunks, 1)));
    if (threads <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }
    if (failed) throw DeadEnd(dead_vertex);
    return batch;
}

inline double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

struct HistogramBin {
    double left, right;
    std::size_t count;
};

struct EmpiricalCltReport {
    int n = 0;
    std::size_t count = 0;
    std::uint64_t seed = 0;
    double E = 0, sigma2 = 0;
    bool degenerate = false;      ///< sigma = 0: values are scaled by n^-1/2 only
    double degenerate_max_abs = 0;
    double mean = 0, variance = 0, skewness = 0, excess_kurtosis = 0;
    double ks_raw = 0;        ///< sup |F_emp - Phi| over the standardized sample
    double ks_corrected = 0;  ///< lattice values compared with Phi at half-step corrected points
    std::int64_t lattice_span = 0;
    std::vector<HistogramBin> histogram;
};

/// Standardized moments and Kolmogorov-Smirnov distances of integer values
/// against Normal(nE, n sigma^2).
inline EmpiricalCltReport empirical_from_values(const std::vector<std::int64_t>& values, int n, double E,
                                                double sigma2, std::size_t bins = 40) {
    EmpiricalCltReport r;
    r.n = n;
    r.count = values.size();
    r.E = E;
    r.sigma2 = sigma2;
    if (values.empty()) return r;
    r.degenerate = sigma2 <= 0;
    const double scale = r.degenerate ? std::sqrt(double(n)) : std::sqrt(n * sigma2);
    std::vector<double> z(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) z[i] = (double(values[i]) - n * E) / scale;
    const double m = double(z.size());
    double mean = 0;
    for (double x : z) mean += x;
    mean /= m;
    double m2 = 0, m3 = 0, m4 = 0;
    for (double x : z) {
        const double d = x - mean;
        m2 += d * d;
        m3 += d * d * d;
        m4 += d * d * d * d;
    }
    m2 /= m;
    m3 /= m;
    m4 /= m;
    r.mean = mean;
    r.variance = m2;
    if (r.degenerate) {
        for (double x : z) r.degenerate_max_abs = std::max(r.degenerate_max_abs, std::abs(x));
        return r;
    }
    r.skewness = m2 > 0 ? m3 / std::pow(m2, 1.5) : 0;
    r.excess_kurtosis = m2 > 0 ? m4 / (m2 * m2) - 3.0 : 0;

    std::vector<std::int64_t> sorted = values;
    std::sort(sorted.begin(), sorted.end());
    std::int64_t span = 0;
    for (std::size_t i = 1; i < sorted.size(); ++i) span = std::gcd(span, sorted[i] - sorted[0]);
    r.lattice_span = span == 0 ? 1 : span;
    const double sd = std::sqrt(n * sigma2);
    for (std::size_t i = 0; i < sorted.size();) {
        std::size_t j = i;
        while (j < sorted.size() && sorted[j] == sorted[i]) ++j;
        const double below = double(i) / m, upto = double(j) / m;
        const double x = (double(sorted[i]) - n * E) / sd;
        const double phi = normal_cdf(x);
        r.ks_raw = std::max({r.ks_raw, std::abs(upto - phi), std::abs(below - phi)});
        const double xc = (double(sorted[i]) + 0.5 * double(r.lattice_span) - n * E) / sd;
        r.ks_corrected = std::max(r.ks_corrected, std::abs(upto - normal_cdf(xc)));
        i = j;
    }
    const double lo = *std::min_element(z.begin(), z.end());
    const double hi = *std::max_element(z.begin(), z.end());
    const double width = (hi - lo) / double(bins);
    r.histogram.resize(bins);
    for (std::size_t b = 0; b < bins; ++b) r.histogram[b] = {lo + b * width, lo + (b + 1) * width, 0};
    for (double x : z) {
        std::size_t b = width > 0 ? std::size_t((x - lo) / width) : 0;
        r.histogram[std::min(b, bins - 1)].count++;
    }
    return r;
}

template <class T>
EmpiricalCltReport empirical_clt(const SpectralData<T>& s, const std::vector<std::int64_t>& dphi, const CltReport<T>& clt,
                                 int n, std::size_t count, std::uint64_t seed, const SampleOptions& options = {}) {
    const auto batch = sample(s, n, count, seed, &dphi, options);
    auto r = empirical_from_values(batch.phi_values, n, to_double(clt.E), to_double(clt.sigma2));
    r.seed = seed;
    return r;
}

struct TypicalityProfile {
    int n = 0;
    std::size_t m = 0;
    double E = 0;
    std::vector<double> values;  ///< (phi(gamma_{i+n}) - phi(gamma_i) - nE) n^-1/2
    double mean = 0, variance = 0;
};

inline TypicalityProfile typicality_profile(const LabeledDigraph& g, const std::vector<std::int64_t>& dphi,
                                            const Word& gamma, int n, std::size_t m, double E) {
    if (gamma.size() < std::size_t(n) + m) throw TooShort(gamma.size(), std::size_t(n) + m);
    const auto path = g.accept(gamma);
    if (!path) throw NotAccepted(format_word(path.path.labels, g.alphabet()), path.halt_index);
    std::vector<std::int64_t> prefix(path.path.vertices.size());
    std::int64_t acc = 0;
    for (std::size_t i = 0; i < prefix.size(); ++i) prefix[i] = (acc += dphi[path.path.vertices[i]]);
    TypicalityProfile t;
    t.n = n;
    t.m = m;
    t.E = E;
    const double root = std::sqrt(double(n));
    for (std::size_t i = 0; i < m; ++i) t.values.push_back((double(prefix[i + n] - prefix[i]) - n * E) / root);
    for (double x : t.values) t.mean += x;
    if (m) t.mean /= double(m);
    for (double x : t.values) t.variance += (x - t.mean) * (x - t.mean);
    if (m) t.variance /= double(m);
    return t;
}

struct DeviationRow {
    int n = 0;
    std::size_t words = 0;
    double mean_abs_deviation = 0;  ///< mean over all S1-geodesics of | n - lambda12 |g|_S2 |
    double max_middle_deviation = 0;  ///< max over the middle 95% by |g|_S2
};

struct GensetComparison {
    std::string s1, s2;
    double E = 0, sigma = 0;
    double lambda12 = 0;  ///< 1/E, so that |g|_S1 ~ lambda12 |g|_S2
    double lambda1 = 0, lambda2 = 0;                 ///< from ball growth
    std::optional<double> lambda1_perron, lambda2_perron;  ///< from combing automata when available
    double log_ratio = 0;                            ///< log lambda1 / log lambda2
    bool inequality_strict = false;
    std::vector<DeviationRow> rows;
    double fitted_K = 0;
    int check_n = 0;
    double check_deviation = 0;
    bool deviation_check_passed = false;
    std::size_t refined_vertices = 0;
};

struct CompareOptions {
    int radius = 8;  ///< synthesis verification radius
    int depth = 3;
    int growth_radius = 10;
    int fit_from = 6, fit_to = 11, check_n = 12;
    double middle = 0.95;
};

inline GensetComparison compare_gensets(const Combing& combing1, const std::string& s2,
                                        const CompareOptions& options = {},
                                        std::optional<double> lambda2_perron = std::nullopt) {
    const GroupOracle& oracle = *combing1.oracle;
    GensetComparison r;
    r.s1 = combing1.genset;
    r.s2 = s2;
    GroupFunction len2 = [&oracle, s2](const Element& g) -> std::int64_t { return oracle.word_length(g, s2); };
    auto outcome = synthesize_dphi(combing1, len2, options.depth, options.radius);
    if (!outcome) throw Error("could not synthesize the S2 length on the S1 combing: " + outcome.failure->reason);
    const auto& fn = *outcome.function;
    r.refined_vertices = fn.combing.digraph.vertex_count();
    const auto spectral = analyze<double>(fn.combing.digraph);
    const auto clt = drift_variance(spectral, fn.dphi);
    r.E = clt.E;
    r.sigma = clt.sigma;
    r.lambda12 = 1.0 / clt.E;

    auto growth = [&](const std::string& genset) {
        const Ball b = oracle.ball(genset, options.growth_radius);
        const int R = options.growth_radius;
        return double(b.sphere_size(R)) / double(b.sphere_size(R - 1));
    };
    r.lambda1 = growth(r.s1);
    r.lambda2 = growth(s2);
    r.lambda1_perron = perron(combing1.digraph);
    r.lambda2_perron = lambda2_perron;
    const double l1 = *r.lambda1_perron;
    const double l2 = lambda2_perron.value_or(r.lambda2);
    r.log_ratio = std::log(l1) / std::log(l2);
    r.inequality_strict = r.lambda12 > r.log_ratio;

    // Exhaustive deviations over all accepted words of each length.
    const auto values = combing1.letter_values();
    const int top = std::max(options.fit_to, options.check_n);
    std::vector<std::vector<int>> lengths(top + 1);
    {
        std::vector<std::size_t> vertex{0};
        std::vector<Element> element{oracle.identity()};
        std::vector<std::size_t> pos{0};
        while (!pos.empty()) {
            const int depth = int(pos.size()) - 1;
            if (pos.back() == 0 && depth >= options.fit_from)
                lengths[depth].push_back(oracle.word_length(element.back(), s2));
            const auto& out = combing1.digraph.out_edges(vertex.back());
            if (depth == top || pos.back() == out.size()) {
                pos.pop_back();
                vertex.pop_back();
                element.pop_back();
                continue;
            }
            const auto& e = combing1.digraph.edges()[out[pos.back()++]];
            element.push_back(oracle.multiply(element.back(), values[e.label]));
            vertex.push_back(e.target);
            pos.push_back(0);
        }
    }
    auto row_for = [&](int n) {
        DeviationRow row;
        row.n = n;
        auto& l = lengths[n];
        std::sort(l.begin(), l.end());
        row.words = l.size();
        const std::size_t cut = std::size_t(std::floor(l.size() * (1.0 - options.middle) / 2.0));
        double total = 0;
        for (std::size_t i = 0; i < l.size(); ++i) {
            const double dev = std::abs(n - r.lambda12 * l[i]);
            total += dev;
            if (i >= cut && i + cut < l.size()) row.max_middle_deviation = std::max(row.max_middle_deviation, dev);
        }
        row.mean_abs_deviation = l.empty() ? 0 : total / double(l.size());
        return row;
    };
    for (int n = options.fit_from; n <= options.fit_to; ++n) {
        r.rows.push_back(row_for(n));
        r.fitted_K = std::max(r.fitted_K, r.rows.back().max_middle_deviation / std::sqrt(double(n)));
    }
    r.check_n = options.check_n;
    const auto check = row_for(options.check_n);
    r.rows.push_back(check);
    r.check_deviation = check.max_middle_deviation;
    r.deviation_check_passed = check.max_middle_deviation <= r.fitted_K * std::sqrt(double(options.check_n));
    return r;
}

}  // namespace hypclt
