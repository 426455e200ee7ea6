#include "sphtail/sampling.hpp"

#include <boost/math/special_functions/beta.hpp>

#include <cmath>
#include <stdexcept>
#include <string>

namespace sphtail {

namespace {

void require_samples(std::uint64_t n_samples) {
    if (n_samples == 0) {
        throw std::invalid_argument("n_samples must be >= 1");
    }
}

void require_alpha(double alpha) {
    if (!(alpha > 0.0 && alpha < 1.0)) {
        throw std::invalid_argument("alpha must lie in (0, 1)");
    }
}

double euclidean_norm(std::span<const double> v) {
    double s = 0.0;
    for (double x : v) s += x * x;
    return std::sqrt(s);
}

McEstimate make_estimate(std::uint64_t hits, std::uint64_t n, std::uint64_t seed, double alpha) {
    const Interval ci = clopper_pearson(hits, n, alpha);
    const double p_hat = static_cast<double>(hits) / static_cast<double>(n);
    return {p_hat, std::min(ci.low, p_hat), std::max(ci.high, p_hat), n, hits, seed, alpha};
}

}  // namespace

UnitVector::UnitVector(std::vector<double> coords) : coords_(std::move(coords)) {
    if (coords_.empty() || std::abs(euclidean_norm(coords_) - 1.0) > 1e-12) {
        throw std::invalid_argument("UnitVector requires unit Euclidean norm");
    }
}

void fill_unit_vector(std::span<double> out, StreamEngine& engine) {
    if (out.size() == 1) {
        double z = 0.0;
        while (z == 0.0) z = engine.normal();
        out[0] = z > 0.0 ? 1.0 : -1.0;
        return;
    }
    for (;;) {
        double sq = 0.0;
        for (double& x : out) {
            x = engine.normal();
            sq += x * x;
        }
        if (sq > 0.0) {
            const double inv = 1.0 / std::sqrt(sq);
            for (double& x : out) x *= inv;
            return;
        }
    }
}

UnitVector sample_sphere(Dimension d, StreamEngine& engine) {
    std::vector<double> coords(static_cast<std::size_t>(d.value()));
    fill_unit_vector(coords, engine);
    return UnitVector(std::move(coords));
}

UnitVector sample_sphere(Dimension d, RngStream stream) {
    StreamEngine engine(stream);
    return sample_sphere(d, engine);
}

Interval clopper_pearson(std::uint64_t hits, std::uint64_t n, double alpha) {
    require_samples(n);
    require_alpha(alpha);
    if (hits > n) {
        throw std::invalid_argument("hits exceed sample count");
    }
    const double k = static_cast<double>(hits);
    const double nn = static_cast<double>(n);
    const double low = hits == 0 ? 0.0 : boost::math::ibeta_inv(k, nn - k + 1.0, 0.5 * alpha);
    const double high = hits == n ? 1.0 : boost::math::ibeta_inv(k + 1.0, nn - k, 1.0 - 0.5 * alpha);
    return {low, high};
}

namespace detail {

unsigned resolve_workers(const McOptions& options, std::uint64_t n_chunks) {
    unsigned w = options.workers;
    if (w == 0) w = std::max(1u, std::thread::hardware_concurrency());
    return static_cast<unsigned>(std::min<std::uint64_t>(w, std::max<std::uint64_t>(n_chunks, 1)));
}

void draw_weighted_sum(std::span<const double> coeffs, std::span<double> out, std::span<double> scratch,
                       StreamEngine& engine) {
    std::fill(out.begin(), out.end(), 0.0);
    for (double a : coeffs) {
        fill_unit_vector(scratch, engine);
        for (std::size_t j = 0; j < out.size(); ++j) out[j] += a * scratch[j];
    }
}

void RunningStats::merge(const RunningStats& other) {
    if (other.n == 0) return;
    if (n == 0) {
        *this = other;
        return;
    }
    const double na = static_cast<double>(n);
    const double nb = static_cast<double>(other.n);
    const double total = na + nb;
    const double delta = other.mean - mean;
    mean += delta * nb / total;
    m2 += other.m2 + delta * delta * na * nb / total;
    n += other.n;
}

}  // namespace detail

McEstimate mc_tail(const TailQuery& q, std::uint64_t n_samples, std::uint64_t seed, double alpha,
                   const McOptions& options) {
    const double threshold[] = {q.u};
    return mc_tail_grid(q.d, q.coeffs, threshold, n_samples, seed, alpha, options).front();
}

std::vector<McEstimate> mc_tail_grid(Dimension d, const CoefficientVector& coeffs,
                                     std::span<const double> thresholds, std::uint64_t n_samples,
                                     std::uint64_t seed, double alpha, const McOptions& options) {
    require_samples(n_samples);
    require_alpha(alpha);
    for (double u : thresholds) {
        if (std::isnan(u)) throw std::invalid_argument("threshold must not be NaN");
    }
    const auto dim = static_cast<std::size_t>(d.value());
    const std::vector<double> us(thresholds.begin(), thresholds.end());
    const std::span<const double> a = coeffs.entries();

    auto chunk = [&](StreamEngine& engine, std::uint64_t count) {
        std::vector<std::uint64_t> hits(us.size(), 0);
        std::vector<double> sum(dim);
        std::vector<double> scratch(dim);
        for (std::uint64_t s = 0; s < count; ++s) {
            detail::draw_weighted_sum(a, sum, scratch, engine);
            const double norm = euclidean_norm(sum);
            for (std::size_t i = 0; i < us.size(); ++i) {
                if (norm > us[i]) ++hits[i];
            }
        }
        return hits;
    };
    const auto per_chunk = detail::run_chunks<std::vector<std::uint64_t>>(n_samples, seed, options, chunk);

    std::vector<std::uint64_t> total(us.size(), 0);
    for (const auto& h : per_chunk) {
        for (std::size_t i = 0; i < us.size(); ++i) total[i] += h[i];
    }
    std::vector<McEstimate> out;
    out.reserve(us.size());
    for (std::size_t i = 0; i < us.size(); ++i) {
        out.push_back(make_estimate(total[i], n_samples, seed, alpha));
    }
    return out;
}

MeanEstimate mc_norm_expectation(const CoefficientVector& coeffs, Dimension d,
                                 const std::function<double(double)>& g, std::uint64_t n_samples,
                                 std::uint64_t seed, const McOptions& options) {
    require_samples(n_samples);
    const auto dim = static_cast<std::size_t>(d.value());
    const std::span<const double> a = coeffs.entries();

    auto chunk = [&](StreamEngine& engine, std::uint64_t count) {
        detail::RunningStats stats;
        std::vector<double> sum(dim);
        std::vector<double> scratch(dim);
        for (std::uint64_t s = 0; s < count; ++s) {
            detail::draw_weighted_sum(a, sum, scratch, engine);
            stats.add(g(euclidean_norm(sum)));
        }
        return stats;
    };
    detail::RunningStats total;
    for (const auto& s : detail::run_chunks<detail::RunningStats>(n_samples, seed, options, chunk)) {
        total.merge(s);
    }
    return total.estimate();
}

MeanEstimate mc_moment(const CoefficientVector& coeffs, Dimension d, double p, std::uint64_t n_samples,
                       std::uint64_t seed, const McOptions& options) {
    if (!(p >= 0.0)) throw std::invalid_argument("moment order must be >= 0");
    return mc_norm_expectation(
        coeffs, d, [p](double r) { return std::pow(r, p); }, n_samples, seed, options);
}

std::vector<double> sample_sum_norms(const CoefficientVector& coeffs, Dimension d, std::uint64_t n_samples,
                                     std::uint64_t seed, const McOptions& options) {
    require_samples(n_samples);
    const auto dim = static_cast<std::size_t>(d.value());
    auto chunk = [&](StreamEngine& engine, std::uint64_t count) {
        std::vector<double> norms(count);
        std::vector<double> sum(dim), scratch(dim);
        for (auto& r : norms) {
            detail::draw_weighted_sum(coeffs.entries(), sum, scratch, engine);
            r = euclidean_norm(sum);
        }
        return norms;
    };
    std::vector<double> out;
    out.reserve(n_samples);
    for (const auto& part : detail::run_chunks<std::vector<double>>(n_samples, seed, options, chunk)) {
        out.insert(out.end(), part.begin(), part.end());
    }
    return out;
}

PairedEstimate mc_paired_norm_expectation(const CoefficientVector& a, const CoefficientVector& b, Dimension d,
                                          const std::function<double(double)>& g, std::uint64_t n_samples,
                                          std::uint64_t seed, const McOptions& options) {
    require_samples(n_samples);
    if (a.size() != b.size()) {
        throw std::invalid_argument("paired estimate needs coefficient vectors of equal length");
    }
    const auto dim = static_cast<std::size_t>(d.value());
    const std::size_t n = a.size();

    struct Triple {
        detail::RunningStats lhs, rhs, diff;
    };
    auto chunk = [&](StreamEngine& engine, std::uint64_t count) {
        Triple t;
        std::vector<double> sa(dim), sb(dim), u(dim);
        for (std::uint64_t s = 0; s < count; ++s) {
            std::fill(sa.begin(), sa.end(), 0.0);
            std::fill(sb.begin(), sb.end(), 0.0);
            for (std::size_t i = 0; i < n; ++i) {
                fill_unit_vector(u, engine);
                for (std::size_t j = 0; j < dim; ++j) {
                    sa[j] += a[i] * u[j];
                    sb[j] += b[i] * u[j];
                }
            }
            const double fa = g(euclidean_norm(sa));
            const double fb = g(euclidean_norm(sb));
            t.lhs.add(fa);
            t.rhs.add(fb);
            t.diff.add(fb - fa);
        }
        return t;
    };
    Triple total;
    for (const auto& t : detail::run_chunks<Triple>(n_samples, seed, options, chunk)) {
        total.lhs.merge(t.lhs);
        total.rhs.merge(t.rhs);
        total.diff.merge(t.diff);
    }
    return {total.lhs.estimate(), total.rhs.estimate(), total.diff.estimate()};
}

RademacherCount exact_rademacher_count(const CoefficientVector& coeffs, double u, bool strict) {
    const std::size_t n = coeffs.size();
    if (n > kMaxEnumerationTerms) {
        throw CapacityError("exact enumeration supports at most " + std::to_string(kMaxEnumerationTerms) +
                            " coefficients, got " + std::to_string(n));
    }
    if (std::isnan(u)) {
        throw std::invalid_argument("threshold must not be NaN");
    }
    // Split the signs into two halves and combine every pair of partial sums.
    const std::size_t n_low = n / 2;
    auto partial_sums = [&](std::size_t first, std::size_t count) {
        std::vector<double> sums(std::size_t{1} << count);
        for (std::size_t mask = 0; mask < sums.size(); ++mask) {
            double s = 0.0;
            for (std::size_t j = 0; j < count; ++j) {
                s += (mask >> j & 1U) ? -coeffs[first + j] : coeffs[first + j];
            }
            sums[mask] = s;
        }
        return sums;
    };
    const std::vector<double> low = partial_sums(0, n_low);
    const std::vector<double> high = partial_sums(n_low, n - n_low);

    std::uint64_t count = 0;
    for (double h : high) {
        for (double l : low) {
            const double r = std::abs(l + h);
            count += strict ? (r > u) : (r >= u);
        }
    }
    return {count, std::uint64_t{1} << n};
}

double exact_rademacher_tail(const CoefficientVector& coeffs, double u, bool strict) {
    return exact_rademacher_count(coeffs, u, strict).probability();
}

double second_moment_exact(const CoefficientVector& coeffs) { return coeffs.sum_of_squares(); }

double fourth_moment_exact(const CoefficientVector& coeffs, Dimension d) {
    const std::span<const double> a = coeffs.entries();
    double diagonal = 0.0;
    double cross = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double ai2 = a[i] * a[i];
        diagonal += ai2 * ai2;
        for (std::size_t j = i + 1; j < a.size(); ++j) cross += ai2 * a[j] * a[j];
    }
    return diagonal + (2.0 + 4.0 / d.as_double()) * cross;
}

double gaussian_fourth_moment(const CoefficientVector& coeffs, Dimension d) {
    const double s2 = coeffs.sum_of_squares();
    return s2 * s2 * (1.0 + 2.0 / d.as_double());
}

}  // namespace sphtail
