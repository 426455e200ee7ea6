#pragma once

// Uniform-on-sphere sampling, deterministic chunked Monte Carlo for
// ||a_1 U_1 + ... + a_n U_n||, and exact small-instance oracles.

#include "sphtail/bounds.hpp"
#include "sphtail/errors.hpp"
#include "sphtail/gaussian_chi.hpp"
#include "sphtail/rng.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <exception>
#include <functional>
#include <mutex>
#include <span>
#include <thread>
#include <vector>

namespace sphtail {

class UnitVector {
public:
    /// Throws std::invalid_argument unless | ||coords|| - 1 | <= 1e-12.
    explicit UnitVector(std::vector<double> coords);

    std::span<const double> coords() const noexcept { return coords_; }
    std::size_t dimension() const noexcept { return coords_.size(); }
    double operator[](std::size_t i) const { return coords_[i]; }

private:
    std::vector<double> coords_;
};

/// Overwrites `out` with a uniform draw from the unit sphere in R^out.size().
/// Normalized standard Gaussian vector; zero-norm draws are redrawn.
void fill_unit_vector(std::span<double> out, StreamEngine& engine);

UnitVector sample_sphere(Dimension d, StreamEngine& engine);

/// First draw of the given stream.
UnitVector sample_sphere(Dimension d, RngStream stream);

/// Samples per chunk.  Chunk k of a run seeded with s always uses
/// RngStream{s, k}; this is what makes results independent of worker count.
inline constexpr std::uint64_t kChunkSize = 8192;

struct McOptions {
    unsigned workers = 0;  ///< 0 selects std::thread::hardware_concurrency()
};

struct Interval {
    double low;
    double high;
};

/// Exact (Clopper-Pearson) two-sided interval at level 1 - alpha.
Interval clopper_pearson(std::uint64_t hits, std::uint64_t n, double alpha);

struct McEstimate {
    double p_hat;
    double ci_low;
    double ci_high;
    std::uint64_t n_samples;
    std::uint64_t hits;
    std::uint64_t seed;
    double alpha;
};

/// Estimates P(||sum a_i U_i|| > q.u) from n_samples draws.
McEstimate mc_tail(const TailQuery& q, std::uint64_t n_samples, std::uint64_t seed, double alpha = 0.01,
                   const McOptions& options = {});

/// mc_tail for several thresholds from a single set of draws.  Element i is
/// identical to mc_tail with thresholds[i] and the same seed.
std::vector<McEstimate> mc_tail_grid(Dimension d, const CoefficientVector& coeffs,
                                     std::span<const double> thresholds, std::uint64_t n_samples,
                                     std::uint64_t seed, double alpha = 0.01, const McOptions& options = {});

struct MeanEstimate {
    double mean;
    double std_error;
    std::uint64_t n_samples;
};

/// Estimates E g(||sum a_i U_i||).
MeanEstimate mc_norm_expectation(const CoefficientVector& coeffs, Dimension d,
                                 const std::function<double(double)>& g, std::uint64_t n_samples,
                                 std::uint64_t seed, const McOptions& options = {});

/// E ||sum a_i U_i||^p by Monte Carlo.
MeanEstimate mc_moment(const CoefficientVector& coeffs, Dimension d, double p, std::uint64_t n_samples,
                       std::uint64_t seed, const McOptions& options = {});

/// n_samples draws of ||sum a_i U_i||, in chunk order.
std::vector<double> sample_sum_norms(const CoefficientVector& coeffs, Dimension d, std::uint64_t n_samples,
                                     std::uint64_t seed, const McOptions& options = {});

struct PairedEstimate {
    MeanEstimate lhs;
    MeanEstimate rhs;
    MeanEstimate difference;  ///< rhs - lhs, per-draw
};

/// E g(||sum a_i U_i||) and E g(||sum b_i U_i||) from the same U_i draws.
PairedEstimate mc_paired_norm_expectation(const CoefficientVector& a, const CoefficientVector& b, Dimension d,
                                          const std::function<double(double)>& g, std::uint64_t n_samples,
                                          std::uint64_t seed, const McOptions& options = {});

inline constexpr std::size_t kMaxEnumerationTerms = 26;

struct RademacherCount {
    std::uint64_t count;    ///< sign patterns meeting the threshold
    std::uint64_t total;    ///< 2^n
    double probability() const noexcept { return static_cast<double>(count) / static_cast<double>(total); }
};

/// Exact count of sign patterns with |sum e_i a_i| > u (strict) or >= u.
/// Throws CapacityError when n exceeds kMaxEnumerationTerms.
RademacherCount exact_rademacher_count(const CoefficientVector& coeffs, double u, bool strict = true);

double exact_rademacher_tail(const CoefficientVector& coeffs, double u, bool strict = true);

/// E ||sum a_i U_i||^2 = sum a_i^2.
double second_moment_exact(const CoefficientVector& coeffs);

/// E ||sum a_i U_i||^4 = sum a_i^4 + (2 + 4/d) sum_{i<j} a_i^2 a_j^2.
double fourth_moment_exact(const CoefficientVector& coeffs, Dimension d);

/// E ||a Z_d||^4 with a = scale(coeffs, d): (sum a_i^2)^2 (1 + 2/d).
double gaussian_fourth_moment(const CoefficientVector& coeffs, Dimension d);

namespace detail {

unsigned resolve_workers(const McOptions& options, std::uint64_t n_chunks);

/// Runs fn(engine, count) once per chunk and returns the per-chunk results
/// in chunk order.
template <class Result, class ChunkFn>
std::vector<Result> run_chunks(std::uint64_t n_samples, std::uint64_t seed, const McOptions& options,
                               ChunkFn fn) {
    const std::uint64_t n_chunks = (n_samples + kChunkSize - 1) / kChunkSize;
    std::vector<Result> results(n_chunks);
    std::atomic<std::uint64_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;

    auto worker = [&] {
        for (;;) {
            const std::uint64_t k = next.fetch_add(1);
            if (k >= n_chunks) return;
            const std::uint64_t count = std::min(kChunkSize, n_samples - k * kChunkSize);
            try {
                StreamEngine engine(RngStream{seed, k});
                results[k] = fn(engine, count);
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure) failure = std::current_exception();
                next.store(n_chunks);
                return;
            }
        }
    };

    const unsigned workers = resolve_workers(options, n_chunks);
    if (workers <= 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        pool.reserve(workers);
        for (unsigned w = 0; w < workers; ++w) pool.emplace_back(worker);
    }
    if (failure) std::rethrow_exception(failure);
    return results;
}

/// Draws sum a_i U_i into `out` (size d); `scratch` must also have size d.
void draw_weighted_sum(std::span<const double> coeffs, std::span<double> out, std::span<double> scratch,
                       StreamEngine& engine);

/// Welford accumulator with a deterministic pairwise merge.
struct RunningStats {
    std::uint64_t n = 0;
    double mean = 0.0;
    double m2 = 0.0;

    void add(double x) {
        ++n;
        const double delta = x - mean;
        mean += delta / static_cast<double>(n);
        m2 += delta * (x - mean);
    }

    void merge(const RunningStats& other);

    double variance() const { return n > 1 ? m2 / static_cast<double>(n - 1) : 0.0; }
    double std_error() const { return n > 1 ? std::sqrt(variance() / static_cast<double>(n)) : 0.0; }
    MeanEstimate estimate() const { return {mean, std_error(), n}; }
};

}  // namespace detail

}  // namespace sphtail
