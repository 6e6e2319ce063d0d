#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "usdeconv/convolution.hpp"
#include "usdeconv/distributions.hpp"
#include "usdeconv/grid.hpp"
#include "usdeconv/rng.hpp"

namespace usdeconv {

struct ModelHyperparams {
    double alpha = 0.1;      // inverse-gamma noise hyperprior shape
    double nu = 0.1;         // inverse-gamma noise hyperprior scale
    double beta = 1.0;       // Potts granularity
    int k_classes = 1;
    double eps_smooth = 1e-8; // |.| ~ sqrt(.^2 + eps) smoothing constant
};

void validate(const ModelHyperparams& hp);

enum class LabelOrder { raster, checkerboard };

struct SamplerConfig {
    int n_iter = 6000;
    int n_burnin = 2000;
    int leapfrog_min = 50;
    int leapfrog_max = 70;
    double eps_init = 1e-5;
    double delta_init = 0.05;   // RWMH proposal variance, per class
    int adapt_window = 100;
    double accept_low = 0.30;
    double accept_high = 0.90;
    double adapt_factor = 0.20;
    std::uint64_t seed = 0;
    std::uint64_t stream_id = 0; // one independent stream per chain
    // Replication switches. The default acceptance-rate adaptation enlarges a
    // step when acceptance is above the band and shrinks it below; the
    // paper-direction flag inverts that. The default RWMH ratio carries the
    // truncated-Gaussian proposal correction; the exact-ratio flag drops it.
    bool paper_exact_ratio = false;
    bool paper_adapt_direction = false;
    LabelOrder label_order = LabelOrder::raster;
};

void validate(const SamplerConfig& cfg);

/// Full variable set of one Gibbs iteration plus the adaptation state.
struct ChainState {
    ImageGrid x;
    LabelField z;
    double sigma2 = 1.0;
    std::vector<GgdClassParams> classes;
    std::vector<double> rwmh_delta;
    double hmc_eps = 1e-5;
    int iteration = 0;
};

/// Per-iteration scalar traces, one entry per column per iteration.
/// accept_rwmh uses 1 accepted / 0 rejected / -1 move skipped (empty class).
struct TraceTable {
    int k = 0;
    std::vector<int> iter;
    std::vector<double> sigma2;
    std::vector<double> xi;          // size() * k
    std::vector<double> gamma;       // size() * k
    std::vector<std::int8_t> accept_hmc;
    std::vector<std::int8_t> accept_rwmh; // size() * k
    std::vector<double> energy;      // potential U(x) after the TRF move
    std::size_t size() const { return iter.size(); }
};

/// Streaming post-burn-in statistics: per-pixel per-class sums/counts of the
/// TRF draws and the retained scalar traces.
struct PosteriorAccumulators {
    std::size_t rows = 0;
    std::size_t cols = 0;
    int k = 0;
    long retained = 0;
    std::vector<double> x_sum;          // N * k, indexed n * k + class
    std::vector<std::uint32_t> z_count; // N * k
    std::vector<double> sigma2_trace;
    std::vector<double> xi_trace;       // retained * k
    std::vector<double> gamma_trace;    // retained * k
    std::vector<double> energy_trace;
};

struct AcceptCounter {
    long attempts = 0;
    long accepts = 0;
};

struct ChainResult {
    PosteriorAccumulators acc;
    TraceTable traces;
    ChainState final_state;
    AcceptCounter hmc_counter;
    std::vector<AcceptCounter> rwmh_counters;
    std::vector<double> eps_history;    // per iteration, for adaptation audits
    std::vector<double> delta_history;  // per iteration * k
};

// ---- individual Gibbs moves ------------------------------------------------

/// sigma^2 ~ IG(alpha + N/2, nu + |y - Hx|^2 / 2).
double sample_noise_variance(const ChainState& st, const ImageGrid& y,
                             const CyclicBlurOperator& op, const ModelHyperparams& hp,
                             RngStream& rng);

/// Log conditional of one class shape given its pixels, up to a constant:
/// N_k log a_k(xi) - sum_i |x_i|^xi / gamma.
double shape_log_conditional(double xi, double gamma, std::span<const double> abs_values);

struct ShapeStepResult {
    double xi = 0.0;
    int accepted = 0; // 1 accepted, 0 rejected, -1 skipped (empty class)
};

/// One truncated-Gaussian random-walk Metropolis-Hastings update of class k's
/// shape (k is 0-based; labels are 1-based).
ShapeStepResult rwmh_shape_step(ChainState& st, int k, bool paper_exact_ratio, RngStream& rng);

/// gamma_k ~ IG(N_k / xi_k, sum_i |x_i|^{xi_k}); holds the previous value for
/// empty classes and all-zero pixel sets, where the conditional degenerates.
double sample_scale(ChainState& st, int k, RngStream& rng);

/// Per-class log weights of pixel n's label conditional (likelihood + Potts).
std::vector<double> label_log_weights(const ChainState& st, const ModelHyperparams& hp,
                                      std::size_t n);

/// One full sweep redrawing every label from its conditional, in raster or
/// checkerboard order, sequentially against the current field.
void sweep_labels(ChainState& st, const ModelHyperparams& hp, LabelOrder order, RngStream& rng);

/// Negative log of the TRF conditional up to a constant, with the smoothed
/// absolute value: |y-Hx|^2/(2 sigma^2) + sum_i (x_i^2+eps)^{xi/2}/gamma.
double potential_energy(const ImageGrid& x, const LabelField& z,
                        std::span<const GgdClassParams> classes, double sigma2,
                        const ImageGrid& y, const CyclicBlurOperator& op, double eps_smooth);

/// Gradient of potential_energy; optionally reports |y-Hx|^2 of the input.
ImageGrid potential_gradient(const ImageGrid& x, const LabelField& z,
                             std::span<const GgdClassParams> classes, double sigma2,
                             const ImageGrid& y, const CyclicBlurOperator& op,
                             double eps_smooth, double* residual_sq_out = nullptr);

struct HmcResult {
    bool accepted = false;
    double energy = 0.0;  // potential at the retained state
    double delta_h = 0.0; // H_old - H_new of the proposal
};

/// Hamiltonian Monte Carlo update of the TRF: unit-mass momentum, leapfrog
/// trajectory of uniformly drawn length, Metropolis correction. Non-finite
/// Hamiltonians auto-reject.
HmcResult hmc_reflectivity_step(ChainState& st, const ImageGrid& y,
                                const CyclicBlurOperator& op, const ModelHyperparams& hp,
                                const SamplerConfig& cfg, RngStream& rng);

// ---- chain driver -----------------------------------------------------------

/// Neutral starting point: x = y, uniform random labels, xi = 1,
/// gamma = mean|y|, unit noise variance (overwritten by the first move).
ChainState default_init(const ImageGrid& y, const ModelHyperparams& hp,
                        const SamplerConfig& cfg, RngStream& rng);

ChainResult run_chain(const ImageGrid& y, const CyclicBlurOperator& op,
                      const ModelHyperparams& hp, const SamplerConfig& cfg);

ChainResult run_chain(const ImageGrid& y, const CyclicBlurOperator& op,
                      const ModelHyperparams& hp, const SamplerConfig& cfg,
                      const ChainState& init);

/// As run_chain but drawing from an already-positioned stream.
ChainResult run_chain_continue(const ImageGrid& y, const CyclicBlurOperator& op,
                               const ModelHyperparams& hp, const SamplerConfig& cfg,
                               const ChainState& init, RngStream& rng);

/// n_chains independent chains on disjoint RNG streams (stream id = chain
/// index), run on up to n_threads workers. Chains 1.. are class-aligned to
/// chain 0 before being returned.
std::vector<ChainResult> run_chains(const ImageGrid& y, const CyclicBlurOperator& op,
                                    const ModelHyperparams& hp, const SamplerConfig& cfg,
                                    int n_chains, int n_threads);

/// Best permutation (old class -> new class) aligning `other` onto `ref` by
/// per-pixel label-count agreement; exhaustive over K! for K <= 8.
std::vector<int> best_class_permutation(const PosteriorAccumulators& ref,
                                        const PosteriorAccumulators& other);

void apply_class_permutation(ChainResult& result, const std::vector<int>& perm);

/// Sum accumulators and concatenate retained traces across chains.
PosteriorAccumulators merge_accumulators(std::span<const ChainResult> results);

/// CSV columns: iter, sigma2, xi_1..K, gamma_1..K, accept_hmc,
/// accept_rwmh_1..K, energy.
void write_traces_csv(const std::string& path, const TraceTable& traces);

} // namespace usdeconv
