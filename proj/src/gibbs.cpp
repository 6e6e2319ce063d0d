#include "usdeconv/gibbs.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <limits>
#include <numbers>
#include <numeric>
#include <stdexcept>
#include <thread>

#include "usdeconv/potts.hpp"

namespace usdeconv {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double log_ggd_normalizer(double xi, double gamma) {
    // log a_k = -log(2 gamma^{1/xi} Gamma(1 + 1/xi))
    const double inv = 1.0 / xi;
    return -std::numbers::ln2 - inv * std::log(gamma) - std::lgamma(1.0 + inv);
}

// Gaussian mass of (lo, hi) under N(mean, variance); the RWMH proposal
// normalizer.
double truncation_mass(double mean, double variance, double lo, double hi) {
    const double sd = std::sqrt(variance);
    return 0.5 * (std::erfc((lo - mean) / sd / std::numbers::sqrt2) -
                  std::erfc((hi - mean) / sd / std::numbers::sqrt2));
}

std::vector<double> gather_abs_class_pixels(const ChainState& st, int k) {
    std::vector<double> vals;
    vals.reserve(st.x.size());
    const int label = k + 1;
    for (std::size_t n = 0; n < st.x.size(); ++n)
        if (st.z.labels[n] == label) vals.push_back(std::fabs(st.x.data[n]));
    return vals;
}

double smoothed_prior_sum(const ImageGrid& x, const LabelField& z,
                          std::span<const GgdClassParams> classes, double eps_smooth) {
    double total = 0.0;
    for (std::size_t n = 0; n < x.size(); ++n) {
        const GgdClassParams& cls = classes[static_cast<std::size_t>(z.labels[n] - 1)];
        const double t = x.data[n] * x.data[n] + eps_smooth;
        total += std::pow(t, 0.5 * cls.shape) / cls.scale;
    }
    return total;
}

void check_model_inputs(const ChainState& st, const ImageGrid& y, const CyclicBlurOperator& op) {
    if (!st.x.same_dims(y) || y.rows != op.rows() || y.cols != op.cols())
        throw std::invalid_argument("gibbs: grid dimension mismatch");
    if (st.z.rows != st.x.rows || st.z.cols != st.x.cols)
        throw std::invalid_argument("gibbs: label dimension mismatch");
    if (st.classes.size() != static_cast<std::size_t>(st.z.k_classes))
        throw std::invalid_argument("gibbs: class parameter count mismatch");
}

} // namespace

void validate(const ModelHyperparams& hp) {
    if (!(hp.alpha > 0.0) || !(hp.nu > 0.0))
        throw std::invalid_argument("hyperparams: alpha and nu must be positive");
    if (!(hp.beta >= 0.0)) throw std::invalid_argument("hyperparams: beta must be >= 0");
    if (hp.k_classes < 1) throw std::invalid_argument("hyperparams: k_classes must be >= 1");
    if (!(hp.eps_smooth > 0.0))
        throw std::invalid_argument("hyperparams: eps_smooth must be positive");
}

void validate(const SamplerConfig& cfg) {
    if (cfg.n_iter < 1) throw std::invalid_argument("sampler: n_iter must be >= 1");
    if (cfg.n_burnin < 0 || cfg.n_burnin >= cfg.n_iter)
        throw std::invalid_argument("sampler: need 0 <= n_burnin < n_iter");
    if (cfg.leapfrog_min < 1 || cfg.leapfrog_min > cfg.leapfrog_max)
        throw std::invalid_argument("sampler: need 1 <= leapfrog_min <= leapfrog_max");
    if (!(cfg.eps_init > 0.0) || !(cfg.delta_init > 0.0))
        throw std::invalid_argument("sampler: step sizes must be positive");
    if (cfg.adapt_window < 1) throw std::invalid_argument("sampler: adapt_window must be >= 1");
    if (!(cfg.accept_low >= 0.0) || !(cfg.accept_low < cfg.accept_high) ||
        !(cfg.accept_high <= 1.0))
        throw std::invalid_argument("sampler: bad acceptance band");
    if (!(cfg.adapt_factor > 0.0) || !(cfg.adapt_factor < 1.0))
        throw std::invalid_argument("sampler: adapt_factor must lie in (0, 1)");
}

double sample_noise_variance(const ChainState& st, const ImageGrid& y,
                             const CyclicBlurOperator& op, const ModelHyperparams& hp,
                             RngStream& rng) {
    check_model_inputs(st, y, op);
    const ImageGrid hx = op.forward(st.x);
    double rsq = 0.0;
    for (std::size_t i = 0; i < y.size(); ++i) {
        const double d = y.data[i] - hx.data[i];
        rsq += d * d;
    }
    if (!std::isfinite(rsq)) throw std::runtime_error("noise move: non-finite residual");
    const double n = static_cast<double>(y.size());
    return inverse_gamma_sample({hp.alpha + 0.5 * n, hp.nu + 0.5 * rsq}, rng);
}

double shape_log_conditional(double xi, double gamma, std::span<const double> abs_values) {
    double pow_sum = 0.0;
    for (double a : abs_values) pow_sum += std::pow(a, xi);
    return static_cast<double>(abs_values.size()) * log_ggd_normalizer(xi, gamma) -
           pow_sum / gamma;
}

ShapeStepResult rwmh_shape_step(ChainState& st, int k, bool paper_exact_ratio, RngStream& rng) {
    if (k < 0 || k >= st.z.k_classes) throw std::invalid_argument("rwmh: class out of range");
    const std::vector<double> vals = gather_abs_class_pixels(st, k);
    GgdClassParams& cls = st.classes[static_cast<std::size_t>(k)];
    if (vals.empty()) return {cls.shape, -1};

    const double delta = st.rwmh_delta[static_cast<std::size_t>(k)];
    const double current = cls.shape;
    const double proposal = truncated_normal_sample(current, delta, 0.0, 3.0, rng);

    double log_ratio = shape_log_conditional(proposal, cls.scale, vals) -
                       shape_log_conditional(current, cls.scale, vals);
    if (!paper_exact_ratio) {
        // Hastings term of the truncated proposal: q(cur|prop)/q(prop|cur)
        // reduces to the ratio of truncation masses.
        log_ratio += std::log(truncation_mass(current, delta, 0.0, 3.0)) -
                     std::log(truncation_mass(proposal, delta, 0.0, 3.0));
    }
    if (!std::isfinite(log_ratio)) return {cls.shape, 0};
    if (std::log(rng.next_open()) < log_ratio) {
        cls.shape = proposal;
        return {proposal, 1};
    }
    return {cls.shape, 0};
}

double sample_scale(ChainState& st, int k, RngStream& rng) {
    if (k < 0 || k >= st.z.k_classes) throw std::invalid_argument("scale move: class out of range");
    GgdClassParams& cls = st.classes[static_cast<std::size_t>(k)];
    const int label = k + 1;
    std::size_t count = 0;
    double pow_sum = 0.0;
    for (std::size_t n = 0; n < st.x.size(); ++n)
        if (st.z.labels[n] == label) {
            pow_sum += std::pow(std::fabs(st.x.data[n]), cls.shape);
            ++count;
        }
    if (count == 0 || !(pow_sum > 0.0)) return cls.scale; // degenerate conditional: hold
    cls.scale = inverse_gamma_sample({static_cast<double>(count) / cls.shape, pow_sum}, rng);
    return cls.scale;
}

std::vector<double> label_log_weights(const ChainState& st, const ModelHyperparams& hp,
                                      std::size_t n) {
    if (n >= st.x.size()) throw std::out_of_range("label weights: pixel index out of bounds");
    const int k_classes = st.z.k_classes;
    std::vector<double> weights(static_cast<std::size_t>(k_classes));
    std::array<std::size_t, 4> nbr{};
    const int n_nbr = neighbors_inline(n, st.z.rows, st.z.cols, nbr);
    const double ax = std::fabs(st.x.data[n]);
    for (int k = 0; k < k_classes; ++k) {
        const GgdClassParams& cls = st.classes[static_cast<std::size_t>(k)];
        int agree = 0;
        for (int i = 0; i < n_nbr; ++i)
            if (st.z.labels[nbr[i]] == k + 1) ++agree;
        weights[static_cast<std::size_t>(k)] =
            log_ggd_normalizer(cls.shape, cls.scale) - std::pow(ax, cls.shape) / cls.scale +
            hp.beta * static_cast<double>(agree);
    }
    return weights;
}

void sweep_labels(ChainState& st, const ModelHyperparams& hp, LabelOrder order, RngStream& rng) {
    const int k_classes = st.z.k_classes;
    if (k_classes == 1) return;
    const std::size_t n_pixels = st.x.size();

    std::vector<double> log_a(static_cast<std::size_t>(k_classes));
    std::vector<double> inv_gamma(static_cast<std::size_t>(k_classes));
    std::vector<double> shape(static_cast<std::size_t>(k_classes));
    for (int k = 0; k < k_classes; ++k) {
        const GgdClassParams& cls = st.classes[static_cast<std::size_t>(k)];
        log_a[k] = log_ggd_normalizer(cls.shape, cls.scale);
        inv_gamma[k] = 1.0 / cls.scale;
        shape[k] = cls.shape;
    }

    std::vector<double> lw(static_cast<std::size_t>(k_classes));
    std::array<std::size_t, 4> nbr{};
    auto update_pixel = [&](std::size_t n) {
        const double ax = std::fabs(st.x.data[n]);
        const int n_nbr = neighbors_inline(n, st.z.rows, st.z.cols, nbr);
        double max_lw = -kInf;
        for (int k = 0; k < k_classes; ++k) {
            int agree = 0;
            for (int i = 0; i < n_nbr; ++i)
                if (st.z.labels[nbr[i]] == k + 1) ++agree;
            const double w =
                log_a[k] - std::pow(ax, shape[k]) * inv_gamma[k] + hp.beta * agree;
            lw[k] = w;
            if (w > max_lw) max_lw = w;
        }
        if (!std::isfinite(max_lw))
            throw std::runtime_error("label sweep: all class weights vanished (parameter blow-up)");
        double sum = 0.0;
        for (int k = 0; k < k_classes; ++k) {
            lw[k] = std::exp(lw[k] - max_lw);
            sum += lw[k];
        }
        const double u = rng.next_double() * sum;
        double cum = 0.0;
        int chosen = k_classes - 1;
        for (int k = 0; k < k_classes; ++k) {
            cum += lw[k];
            if (u < cum) {
                chosen = k;
                break;
            }
        }
        st.z.labels[n] = chosen + 1;
    };

    if (order == LabelOrder::raster) {
        for (std::size_t n = 0; n < n_pixels; ++n) update_pixel(n);
    } else {
        for (int parity = 0; parity < 2; ++parity)
            for (std::size_t r = 0; r < st.z.rows; ++r)
                for (std::size_t c = (r + static_cast<std::size_t>(parity)) % 2; c < st.z.cols;
                     c += 2)
                    update_pixel(r * st.z.cols + c);
    }
}

double potential_energy(const ImageGrid& x, const LabelField& z,
                        std::span<const GgdClassParams> classes, double sigma2,
                        const ImageGrid& y, const CyclicBlurOperator& op, double eps_smooth) {
    const ImageGrid hx = op.forward(x);
    double rsq = 0.0;
    for (std::size_t i = 0; i < y.size(); ++i) {
        const double d = y.data[i] - hx.data[i];
        rsq += d * d;
    }
    return 0.5 * rsq / sigma2 + smoothed_prior_sum(x, z, classes, eps_smooth);
}

ImageGrid potential_gradient(const ImageGrid& x, const LabelField& z,
                             std::span<const GgdClassParams> classes, double sigma2,
                             const ImageGrid& y, const CyclicBlurOperator& op,
                             double eps_smooth, double* residual_sq_out) {
    ImageGrid residual = op.forward(x);
    double rsq = 0.0;
    for (std::size_t i = 0; i < y.size(); ++i) {
        residual.data[i] -= y.data[i];
        rsq += residual.data[i] * residual.data[i];
    }
    if (residual_sq_out) *residual_sq_out = rsq;
    ImageGrid grad = op.adjoint(residual); // H^T (Hx - y)
    const double inv_sigma2 = 1.0 / sigma2;
    for (std::size_t n = 0; n < x.size(); ++n) {
        const GgdClassParams& cls = classes[static_cast<std::size_t>(z.labels[n] - 1)];
        const double t = x.data[n] * x.data[n] + eps_smooth;
        grad.data[n] = grad.data[n] * inv_sigma2 +
                       cls.shape / cls.scale * x.data[n] * std::pow(t, 0.5 * cls.shape - 1.0);
    }
    return grad;
}

HmcResult hmc_reflectivity_step(ChainState& st, const ImageGrid& y,
                                const CyclicBlurOperator& op, const ModelHyperparams& hp,
                                const SamplerConfig& cfg, RngStream& rng) {
    check_model_inputs(st, y, op);
    const std::size_t n_pixels = st.x.size();
    const double eps = st.hmc_eps;

    std::vector<double> momentum(n_pixels);
    for (double& p : momentum) p = standard_normal_sample(rng);
    const int n_steps = uniform_int_sample(cfg.leapfrog_min, cfg.leapfrog_max, rng);

    double kinetic_old = 0.0;
    for (double p : momentum) kinetic_old += p * p;
    kinetic_old *= 0.5;
    const double u_old = potential_energy(st.x, st.z, st.classes, st.sigma2, y, op, hp.eps_smooth);
    const double h_old = u_old + kinetic_old;

    ImageGrid x_prop = st.x;
    double final_rsq = 0.0;
    ImageGrid grad = potential_gradient(x_prop, st.z, st.classes, st.sigma2, y, op,
                                        hp.eps_smooth, &final_rsq);
    for (std::size_t i = 0; i < n_pixels; ++i) momentum[i] -= 0.5 * eps * grad.data[i];
    for (int step = 1; step <= n_steps; ++step) {
        for (std::size_t i = 0; i < n_pixels; ++i) x_prop.data[i] += eps * momentum[i];
        grad = potential_gradient(x_prop, st.z, st.classes, st.sigma2, y, op, hp.eps_smooth,
                                  &final_rsq);
        const double scale = (step < n_steps) ? eps : 0.5 * eps;
        for (std::size_t i = 0; i < n_pixels; ++i) momentum[i] -= scale * grad.data[i];
    }

    const double u_new =
        0.5 * final_rsq / st.sigma2 + smoothed_prior_sum(x_prop, st.z, st.classes, hp.eps_smooth);
    double kinetic_new = 0.0;
    for (double p : momentum) kinetic_new += p * p;
    kinetic_new *= 0.5;
    const double h_new = u_new + kinetic_new;

    if (!std::isfinite(h_new)) return {false, u_old, -kInf}; // blown-up trajectory: auto-reject
    const double delta_h = h_old - h_new;
    if (std::log(rng.next_open()) < delta_h) {
        st.x.data.swap(x_prop.data);
        return {true, u_new, delta_h};
    }
    return {false, u_old, delta_h};
}

ChainState default_init(const ImageGrid& y, const ModelHyperparams& hp,
                        const SamplerConfig& cfg, RngStream& rng) {
    validate(hp);
    ChainState st;
    st.x = y;
    std::vector<int> labels(y.size());
    for (int& v : labels) v = uniform_int_sample(1, hp.k_classes, rng);
    st.z = LabelField(y.rows, y.cols, hp.k_classes, std::move(labels));
    double mean_abs = 0.0;
    for (double v : y.data) mean_abs += std::fabs(v);
    mean_abs /= static_cast<double>(y.size());
    if (!(mean_abs > 0.0)) mean_abs = 1.0;
    st.classes.assign(static_cast<std::size_t>(hp.k_classes), GgdClassParams{1.0, mean_abs});
    st.rwmh_delta.assign(static_cast<std::size_t>(hp.k_classes), cfg.delta_init);
    st.hmc_eps = cfg.eps_init;
    st.sigma2 = 1.0;
    st.iteration = 0;
    return st;
}

ChainResult run_chain(const ImageGrid& y, const CyclicBlurOperator& op,
                      const ModelHyperparams& hp, const SamplerConfig& cfg) {
    validate(cfg);
    RngStream rng(cfg.seed, cfg.stream_id);
    const ChainState init = default_init(y, hp, cfg, rng);
    // continue on the same stream so (seed, stream) fixes the whole run
    return run_chain_continue(y, op, hp, cfg, init, rng);
}

namespace {

struct WindowCounters {
    AcceptCounter hmc;
    std::vector<AcceptCounter> rwmh;
};

double adapt_step(double step, double fraction, const SamplerConfig& cfg) {
    double up = 1.0 + cfg.adapt_factor;
    double down = 1.0 - cfg.adapt_factor;
    if (cfg.paper_adapt_direction) std::swap(up, down);
    if (fraction > cfg.accept_high) return step * up;
    if (fraction < cfg.accept_low) return step * down;
    return step;
}

} // namespace

ChainResult run_chain_continue(const ImageGrid& y, const CyclicBlurOperator& op,
                               const ModelHyperparams& hp, const SamplerConfig& cfg,
                               const ChainState& init, RngStream& rng) {
    validate(hp);
    validate(cfg);
    ChainState st = init;
    check_model_inputs(st, y, op);
    const int k_classes = hp.k_classes;
    const std::size_t n_pixels = y.size();

    ChainResult result;
    result.rwmh_counters.assign(static_cast<std::size_t>(k_classes), AcceptCounter{});
    result.acc.rows = y.rows;
    result.acc.cols = y.cols;
    result.acc.k = k_classes;
    result.acc.x_sum.assign(n_pixels * static_cast<std::size_t>(k_classes), 0.0);
    result.acc.z_count.assign(n_pixels * static_cast<std::size_t>(k_classes), 0);
    result.traces.k = k_classes;

    WindowCounters window;
    window.rwmh.assign(static_cast<std::size_t>(k_classes), AcceptCounter{});

    for (int t = 1; t <= cfg.n_iter; ++t) {
        st.iteration = t;
        st.sigma2 = sample_noise_variance(st, y, op, hp, rng);

        std::vector<std::int8_t> rwmh_flags(static_cast<std::size_t>(k_classes), -1);
        for (int k = 0; k < k_classes; ++k) {
            const ShapeStepResult step = rwmh_shape_step(st, k, cfg.paper_exact_ratio, rng);
            rwmh_flags[static_cast<std::size_t>(k)] = static_cast<std::int8_t>(step.accepted);
            if (step.accepted >= 0) {
                ++result.rwmh_counters[k].attempts;
                ++window.rwmh[k].attempts;
                if (step.accepted == 1) {
                    ++result.rwmh_counters[k].accepts;
                    ++window.rwmh[k].accepts;
                }
            }
        }
        for (int k = 0; k < k_classes; ++k) sample_scale(st, k, rng);
        sweep_labels(st, hp, cfg.label_order, rng);
        const HmcResult hmc = hmc_reflectivity_step(st, y, op, hp, cfg, rng);
        ++result.hmc_counter.attempts;
        ++window.hmc.attempts;
        if (hmc.accepted) {
            ++result.hmc_counter.accepts;
            ++window.hmc.accepts;
        }

        result.traces.iter.push_back(t);
        result.traces.sigma2.push_back(st.sigma2);
        for (int k = 0; k < k_classes; ++k) {
            result.traces.xi.push_back(st.classes[static_cast<std::size_t>(k)].shape);
            result.traces.gamma.push_back(st.classes[static_cast<std::size_t>(k)].scale);
            result.traces.accept_rwmh.push_back(rwmh_flags[static_cast<std::size_t>(k)]);
        }
        result.traces.accept_hmc.push_back(hmc.accepted ? 1 : 0);
        result.traces.energy.push_back(hmc.energy);
        result.eps_history.push_back(st.hmc_eps);
        for (int k = 0; k < k_classes; ++k)
            result.delta_history.push_back(st.rwmh_delta[static_cast<std::size_t>(k)]);

        if (t > cfg.n_burnin) {
            ++result.acc.retained;
            for (std::size_t n = 0; n < n_pixels; ++n) {
                const std::size_t slot =
                    n * static_cast<std::size_t>(k_classes) +
                    static_cast<std::size_t>(st.z.labels[n] - 1);
                result.acc.x_sum[slot] += st.x.data[n];
                ++result.acc.z_count[slot];
            }
            result.acc.sigma2_trace.push_back(st.sigma2);
            for (int k = 0; k < k_classes; ++k) {
                result.acc.xi_trace.push_back(st.classes[static_cast<std::size_t>(k)].shape);
                result.acc.gamma_trace.push_back(st.classes[static_cast<std::size_t>(k)].scale);
            }
            result.acc.energy_trace.push_back(hmc.energy);
        }

        // burn-in-only step-size tuning, classical direction by default
        if (t % cfg.adapt_window == 0 && t <= cfg.n_burnin) {
            if (window.hmc.attempts > 0) {
                const double frac = static_cast<double>(window.hmc.accepts) /
                                    static_cast<double>(window.hmc.attempts);
                st.hmc_eps = adapt_step(st.hmc_eps, frac, cfg);
            }
            for (int k = 0; k < k_classes; ++k) {
                auto& wk = window.rwmh[static_cast<std::size_t>(k)];
                if (wk.attempts > 0) {
                    const double frac =
                        static_cast<double>(wk.accepts) / static_cast<double>(wk.attempts);
                    st.rwmh_delta[static_cast<std::size_t>(k)] =
                        adapt_step(st.rwmh_delta[static_cast<std::size_t>(k)], frac, cfg);
                }
                wk = AcceptCounter{};
            }
            window.hmc = AcceptCounter{};
        }
    }
    result.final_state = std::move(st);
    return result;
}

ChainResult run_chain(const ImageGrid& y, const CyclicBlurOperator& op,
                      const ModelHyperparams& hp, const SamplerConfig& cfg,
                      const ChainState& init) {
    RngStream rng(cfg.seed, cfg.stream_id);
    return run_chain_continue(y, op, hp, cfg, init, rng);
}

std::vector<ChainResult> run_chains(const ImageGrid& y, const CyclicBlurOperator& op,
                                    const ModelHyperparams& hp, const SamplerConfig& cfg,
                                    int n_chains, int n_threads) {
    if (n_chains < 1) throw std::invalid_argument("run_chains: need at least one chain");
    std::vector<ChainResult> results(static_cast<std::size_t>(n_chains));
    std::vector<std::exception_ptr> errors(static_cast<std::size_t>(n_chains));
    std::atomic<int> next{0};
    const int workers = std::max(1, std::min(n_threads, n_chains));

    auto work = [&]() {
        for (;;) {
            const int idx = next.fetch_add(1);
            if (idx >= n_chains) return;
            try {
                SamplerConfig chain_cfg = cfg;
                chain_cfg.stream_id = cfg.stream_id + static_cast<std::uint64_t>(idx);
                results[static_cast<std::size_t>(idx)] = run_chain(y, op, hp, chain_cfg);
            } catch (...) {
                errors[static_cast<std::size_t>(idx)] = std::current_exception();
            }
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int i = 0; i < workers; ++i) pool.emplace_back(work);
    for (auto& th : pool) th.join();
    for (auto& err : errors)
        if (err) std::rethrow_exception(err);

    for (std::size_t i = 1; i < results.size(); ++i) {
        const std::vector<int> perm = best_class_permutation(results[0].acc, results[i].acc);
        apply_class_permutation(results[i], perm);
    }
    return results;
}

std::vector<int> best_class_permutation(const PosteriorAccumulators& ref,
                                        const PosteriorAccumulators& other) {
    if (ref.k != other.k || ref.rows != other.rows || ref.cols != other.cols)
        throw std::invalid_argument("class alignment: accumulator shape mismatch");
    const int k = ref.k;
    if (k > 8) throw std::invalid_argument("class alignment: K too large for exhaustive search");
    const std::size_t n = ref.rows * ref.cols;
    // MAP label per pixel for each accumulator, then confusion counts
    auto map_label = [k](const PosteriorAccumulators& acc, std::size_t pixel) {
        int best = 0;
        std::uint32_t best_count = acc.z_count[pixel * static_cast<std::size_t>(k)];
        for (int c = 1; c < k; ++c) {
            const std::uint32_t count = acc.z_count[pixel * static_cast<std::size_t>(k) + c];
            if (count > best_count) {
                best = c;
                best_count = count;
            }
        }
        return best;
    };
    std::vector<long> confusion(static_cast<std::size_t>(k) * k, 0);
    for (std::size_t p = 0; p < n; ++p)
        ++confusion[static_cast<std::size_t>(map_label(ref, p)) * k + map_label(other, p)];

    std::vector<int> perm(static_cast<std::size_t>(k));
    std::iota(perm.begin(), perm.end(), 0);
    std::vector<int> best_perm = perm;
    long best_score = -1;
    do {
        long score = 0;
        for (int j = 0; j < k; ++j)
            score += confusion[static_cast<std::size_t>(perm[j]) * k + j];
        if (score > best_score) {
            best_score = score;
            best_perm = perm;
        }
    } while (std::next_permutation(perm.begin(), perm.end()));
    return best_perm; // best_perm[old_class] = aligned class
}

void apply_class_permutation(ChainResult& result, const std::vector<int>& perm) {
    const int k = result.acc.k;
    if (perm.size() != static_cast<std::size_t>(k))
        throw std::invalid_argument("class alignment: permutation size mismatch");
    bool identity = true;
    for (int j = 0; j < k; ++j) identity = identity && perm[j] == j;
    if (identity) return;

    auto permute_blocked = [&](auto& vec) {
        using T = typename std::remove_reference_t<decltype(vec)>::value_type;
        std::vector<T> tmp(static_cast<std::size_t>(k));
        for (std::size_t off = 0; off + k <= vec.size(); off += k) {
            for (int j = 0; j < k; ++j) tmp[static_cast<std::size_t>(perm[j])] = vec[off + j];
            std::copy(tmp.begin(), tmp.end(), vec.begin() + static_cast<std::ptrdiff_t>(off));
        }
    };
    permute_blocked(result.acc.x_sum);
    permute_blocked(result.acc.z_count);
    permute_blocked(result.acc.xi_trace);
    permute_blocked(result.acc.gamma_trace);
    permute_blocked(result.traces.xi);
    permute_blocked(result.traces.gamma);
    permute_blocked(result.traces.accept_rwmh);
    permute_blocked(result.delta_history);

    auto permute_per_class = [&](auto& vec) {
        auto tmp = vec;
        for (int j = 0; j < k; ++j) tmp[static_cast<std::size_t>(perm[j])] = vec[j];
        vec = std::move(tmp);
    };
    permute_per_class(result.final_state.classes);
    permute_per_class(result.final_state.rwmh_delta);
    permute_per_class(result.rwmh_counters);
    for (int& label : result.final_state.z.labels) label = perm[label - 1] + 1;
}

PosteriorAccumulators merge_accumulators(std::span<const ChainResult> results) {
    if (results.empty()) throw std::invalid_argument("merge: no chains");
    PosteriorAccumulators merged = results[0].acc;
    for (std::size_t i = 1; i < results.size(); ++i) {
        const PosteriorAccumulators& acc = results[i].acc;
        if (acc.k != merged.k || acc.rows != merged.rows || acc.cols != merged.cols)
            throw std::invalid_argument("merge: accumulator shape mismatch");
        merged.retained += acc.retained;
        for (std::size_t j = 0; j < merged.x_sum.size(); ++j) merged.x_sum[j] += acc.x_sum[j];
        for (std::size_t j = 0; j < merged.z_count.size(); ++j) merged.z_count[j] += acc.z_count[j];
        merged.sigma2_trace.insert(merged.sigma2_trace.end(), acc.sigma2_trace.begin(),
                                   acc.sigma2_trace.end());
        merged.xi_trace.insert(merged.xi_trace.end(), acc.xi_trace.begin(), acc.xi_trace.end());
        merged.gamma_trace.insert(merged.gamma_trace.end(), acc.gamma_trace.begin(),
                                  acc.gamma_trace.end());
        merged.energy_trace.insert(merged.energy_trace.end(), acc.energy_trace.begin(),
                                   acc.energy_trace.end());
    }
    return merged;
}

void write_traces_csv(const std::string& path, const TraceTable& traces) {
    std::ofstream os(path, std::ios::trunc);
    if (!os) throw std::runtime_error("traces: cannot open " + path + " for writing");
    os.precision(17);
    os << "iter,sigma2";
    for (int k = 1; k <= traces.k; ++k) os << ",xi_" << k;
    for (int k = 1; k <= traces.k; ++k) os << ",gamma_" << k;
    os << ",accept_hmc";
    for (int k = 1; k <= traces.k; ++k) os << ",accept_rwmh_" << k;
    os << ",energy\n";
    const std::size_t kk = static_cast<std::size_t>(traces.k);
    for (std::size_t i = 0; i < traces.size(); ++i) {
        os << traces.iter[i] << ',' << traces.sigma2[i];
        for (std::size_t k = 0; k < kk; ++k) os << ',' << traces.xi[i * kk + k];
        for (std::size_t k = 0; k < kk; ++k) os << ',' << traces.gamma[i * kk + k];
        os << ',' << static_cast<int>(traces.accept_hmc[i]);
        for (std::size_t k = 0; k < kk; ++k)
            os << ',' << static_cast<int>(traces.accept_rwmh[i * kk + k]);
        os << ',' << traces.energy[i] << '\n';
    }
    if (!os) throw std::runtime_error("traces: write failure on " + path);
}

} // namespace usdeconv
