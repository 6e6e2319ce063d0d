#include "usdeconv/baselines.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace usdeconv {

namespace {

double l1_objective(const ImageGrid& y, const CyclicBlurOperator& op, const ImageGrid& x,
                    double lambda) {
    const ImageGrid hx = op.forward(x);
    double fit = 0.0;
    for (std::size_t i = 0; i < y.size(); ++i) {
        const double d = y.data[i] - hx.data[i];
        fit += d * d;
    }
    double l1 = 0.0;
    for (double v : x.data) l1 += std::fabs(v);
    return 0.5 * fit + lambda * l1;
}

double soft_threshold(double v, double t) {
    if (v > t) return v - t;
    if (v < -t) return v + t;
    return 0.0;
}

} // namespace

ImageGrid l2_deconvolve(const ImageGrid& y, const CyclicBlurOperator& op, double lambda) {
    if (!(lambda > 0.0)) throw std::invalid_argument("l2 deconvolve: lambda must be positive");
    if (y.rows != op.rows() || y.cols != op.cols())
        throw std::invalid_argument("l2 deconvolve: dimension mismatch");
    Fft2d fft(y.rows, y.cols);
    std::vector<std::complex<double>> spec(fft.spectrum_size());
    fft.forward(y.data.data(), spec.data());
    const auto& otf = op.otf();
    for (std::size_t i = 0; i < spec.size(); ++i)
        spec[i] = std::conj(otf[i]) * spec[i] / (std::norm(otf[i]) + lambda);
    ImageGrid x(y.rows, y.cols, 0.0);
    fft.inverse(spec.data(), x.data.data());
    return x;
}

L1Result l1_deconvolve(const ImageGrid& y, const CyclicBlurOperator& op, double lambda,
                       int max_iter, double tol, bool accelerate) {
    if (!(lambda > 0.0)) throw std::invalid_argument("l1 deconvolve: lambda must be positive");
    if (y.rows != op.rows() || y.cols != op.cols())
        throw std::invalid_argument("l1 deconvolve: dimension mismatch");
    if (max_iter < 1) throw std::invalid_argument("l1 deconvolve: max_iter must be >= 1");

    const double lip = op.norm_sq();
    if (!(lip > 0.0)) throw std::invalid_argument("l1 deconvolve: zero operator");
    const double step = 1.0 / lip;
    const double thresh = lambda * step;

    L1Result result;
    result.x = ImageGrid(y.rows, y.cols, 0.0);
    ImageGrid z = result.x; // FISTA extrapolation point
    double t_momentum = 1.0;
    double prev_obj = l1_objective(y, op, result.x, lambda);
    result.objective.push_back(prev_obj);

    for (int it = 1; it <= max_iter; ++it) {
        const ImageGrid& base = accelerate ? z : result.x;
        ImageGrid residual = op.forward(base);
        for (std::size_t i = 0; i < residual.size(); ++i) residual.data[i] -= y.data[i];
        const ImageGrid grad = op.adjoint(residual);
        ImageGrid next(y.rows, y.cols, 0.0);
        for (std::size_t i = 0; i < next.size(); ++i)
            next.data[i] = soft_threshold(base.data[i] - step * grad.data[i], thresh);

        if (accelerate) {
            const double t_next = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t_momentum * t_momentum));
            const double mix = (t_momentum - 1.0) / t_next;
            for (std::size_t i = 0; i < z.size(); ++i)
                z.data[i] = next.data[i] + mix * (next.data[i] - result.x.data[i]);
            t_momentum = t_next;
        }
        result.x = std::move(next);
        result.iterations = it;

        const double obj = l1_objective(y, op, result.x, lambda);
        result.objective.push_back(obj);
        if (!accelerate && obj > prev_obj * (1.0 + 1e-12) + 1e-300) {
            std::ostringstream os;
            os << "l1 deconvolve: objective increased at iteration " << it << " (" << prev_obj
               << " -> " << obj << ")";
            throw std::runtime_error(os.str());
        }
        const double decrease = (prev_obj - obj) / std::max(std::fabs(prev_obj), 1e-300);
        prev_obj = obj;
        if (decrease >= 0.0 && decrease < tol) {
            result.converged = true;
            break;
        }
    }
    return result;
}

} // namespace usdeconv
