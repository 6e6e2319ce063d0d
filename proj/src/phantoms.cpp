#include "usdeconv/phantoms.hpp"

#include <cmath>
#include <stdexcept>

namespace usdeconv {

void validate(const PhantomSpec& spec) {
    if (spec.rows == 0 || spec.cols == 0) throw std::invalid_argument("phantom: empty dimension");
    if (spec.k_classes < 1) throw std::invalid_argument("phantom: k_classes must be >= 1");
    if (spec.class_params.size() != static_cast<std::size_t>(spec.k_classes))
        throw std::invalid_argument("phantom: class parameter count mismatch");
    for (const auto& p : spec.class_params) validate(p);
    if (spec.geometry.empty()) throw std::invalid_argument("phantom: empty geometry");
    for (const auto& s : spec.geometry)
        if (s.cls < 1 || s.cls > spec.k_classes)
            throw std::invalid_argument("phantom: shape class out of range");
}

LabelField render_labels(const PhantomSpec& spec) {
    validate(spec);
    const double nr = static_cast<double>(spec.rows);
    const double nc = static_cast<double>(spec.cols);
    const double nmin = std::min(nr, nc);
    std::vector<int> labels(spec.rows * spec.cols, 0);
    for (const auto& s : spec.geometry) {
        for (std::size_t r = 0; r < spec.rows; ++r)
            for (std::size_t c = 0; c < spec.cols; ++c) {
                const double pr = static_cast<double>(r);
                const double pc = static_cast<double>(c);
                bool inside = false;
                switch (s.kind) {
                    case ShapeSpec::Kind::background:
                        inside = true;
                        break;
                    case ShapeSpec::Kind::disc: {
                        const double dr = pr - s.center_row * nr;
                        const double dc = pc - s.center_col * nc;
                        const double radius = s.extent_row * nmin;
                        inside = dr * dr + dc * dc <= radius * radius;
                        break;
                    }
                    case ShapeSpec::Kind::rectangle: {
                        const double r0 = s.center_row * nr;
                        const double c0 = s.center_col * nc;
                        inside = pr >= r0 && pr < r0 + s.extent_row * nr && pc >= c0 &&
                                 pc < c0 + s.extent_col * nc;
                        break;
                    }
                    case ShapeSpec::Kind::ellipse: {
                        const double dr = (pr - s.center_row * nr) / (s.extent_row * nr);
                        const double dc = (pc - s.center_col * nc) / (s.extent_col * nc);
                        inside = dr * dr + dc * dc <= 1.0;
                        break;
                    }
                }
                if (inside) labels[r * spec.cols + c] = s.cls;
            }
    }
    for (int v : labels)
        if (v == 0) throw std::invalid_argument("phantom: geometry leaves uncovered pixels");
    return LabelField(spec.rows, spec.cols, spec.k_classes, std::move(labels));
}

ImageGrid draw_trf(const LabelField& labels, std::span<const GgdClassParams> params,
                   RngStream& rng) {
    if (params.size() != static_cast<std::size_t>(labels.k_classes))
        throw std::invalid_argument("phantom: class parameter count mismatch");
    ImageGrid x(labels.rows, labels.cols, 0.0);
    for (std::size_t n = 0; n < x.size(); ++n)
        x.data[n] = ggd_sample(params[static_cast<std::size_t>(labels.labels[n] - 1)], rng);
    return x;
}

DegradeResult degrade(const ImageGrid& x, const CyclicBlurOperator& op, double bsnr_db,
                      RngStream& rng) {
    DegradeResult out;
    out.y = op.forward(x);
    if (std::isinf(bsnr_db) && bsnr_db > 0.0) {
        out.sigma2 = 0.0;
        return out;
    }
    if (!std::isfinite(bsnr_db)) throw std::invalid_argument("degrade: BSNR must be finite");
    double mean = 0.0;
    for (double v : out.y.data) mean += v;
    mean /= static_cast<double>(out.y.size());
    double signal = 0.0;
    for (double v : out.y.data) {
        const double d = v - mean;
        signal += d * d;
    }
    if (!(signal > 0.0)) throw std::invalid_argument("degrade: blurred image is constant");
    out.sigma2 = signal / (static_cast<double>(out.y.size()) * std::pow(10.0, bsnr_db / 10.0));
    const double sd = std::sqrt(out.sigma2);
    for (double& v : out.y.data) v += sd * standard_normal_sample(rng);
    return out;
}

PhantomSpec preset_group1(std::size_t rows, std::size_t cols) {
    PhantomSpec spec;
    spec.rows = rows;
    spec.cols = cols;
    spec.k_classes = 2;
    spec.class_params = {{1.8, 2.0}, {0.6, 1.0}}; // background, inclusion
    spec.geometry = {
        {ShapeSpec::Kind::background, 0, 0, 0, 0, 1},
        {ShapeSpec::Kind::disc, 0.5, 0.5, 0.25, 0, 2},
    };
    return spec;
}

PhantomSpec preset_group2(std::size_t rows, std::size_t cols) {
    PhantomSpec spec;
    spec.rows = rows;
    spec.cols = cols;
    spec.k_classes = 2;
    spec.class_params = {{1.5, 1.0}, {0.8, 10.0}}; // background, inclusions
    spec.geometry = {
        {ShapeSpec::Kind::background, 0, 0, 0, 0, 1},
        {ShapeSpec::Kind::disc, 0.30, 0.30, 0.14, 0, 2},
        {ShapeSpec::Kind::disc, 0.68, 0.66, 0.14, 0, 2},
    };
    return spec;
}

PhantomSpec preset_group3(std::size_t rows, std::size_t cols) {
    PhantomSpec spec;
    spec.rows = rows;
    spec.cols = cols;
    spec.k_classes = 3;
    // background, skin band, tumor
    spec.class_params = {{0.5, 1.0}, {1.0, 30.0}, {1.8, 2.0}};
    spec.geometry = {
        {ShapeSpec::Kind::background, 0, 0, 0, 0, 1},
        {ShapeSpec::Kind::rectangle, 0.0, 0.0, 0.18, 1.0, 2},
        {ShapeSpec::Kind::ellipse, 0.45, 0.5, 0.16, 0.28, 3},
    };
    return spec;
}

PhantomSpec preset_two_band(std::size_t rows, std::size_t cols, GgdClassParams left,
                            GgdClassParams right) {
    PhantomSpec spec;
    spec.rows = rows;
    spec.cols = cols;
    spec.k_classes = 2;
    spec.class_params = {left, right};
    spec.geometry = {
        {ShapeSpec::Kind::background, 0, 0, 0, 0, 1},
        {ShapeSpec::Kind::rectangle, 0.0, 0.5, 1.0, 0.5, 2},
    };
    return spec;
}

PhantomSpec preset_iid(std::size_t rows, std::size_t cols, GgdClassParams params) {
    PhantomSpec spec;
    spec.rows = rows;
    spec.cols = cols;
    spec.k_classes = 1;
    spec.class_params = {params};
    spec.geometry = {{ShapeSpec::Kind::background, 0, 0, 0, 0, 1}};
    return spec;
}

PhantomOutput simulate(const PhantomSpec& spec, double bsnr_db, std::size_t psf_size,
                       double psf_variance) {
    PhantomOutput out;
    RngStream rng(spec.seed, 0);
    out.z = render_labels(spec);
    out.x = draw_trf(out.z, spec.class_params, rng);
    out.psf = gaussian_psf(psf_size, psf_variance);
    CyclicBlurOperator op(out.psf, spec.rows, spec.cols);
    DegradeResult deg = degrade(out.x, op, bsnr_db, rng);
    out.y = std::move(deg.y);
    out.sigma2 = deg.sigma2;
    return out;
}

} // namespace usdeconv
