#pragma once

#include <span>
#include <vector>

#include "usdeconv/convolution.hpp"
#include "usdeconv/distributions.hpp"
#include "usdeconv/grid.hpp"
#include "usdeconv/rng.hpp"

namespace usdeconv {

/// One region of a phantom geometry. Coordinates and radii are fractions of
/// the grid dimensions so presets scale with --dims. Later shapes overwrite
/// earlier ones.
struct ShapeSpec {
    enum class Kind { background, disc, rectangle, ellipse };
    Kind kind = Kind::background;
    double center_row = 0.0; // disc/ellipse center, rectangle origin
    double center_col = 0.0;
    double extent_row = 0.0; // disc radius (uses min dim), rectangle h, ellipse r_row
    double extent_col = 0.0; // rectangle w, ellipse r_col
    int cls = 1;             // 1-based class label
};

struct PhantomSpec {
    std::size_t rows = 0;
    std::size_t cols = 0;
    int k_classes = 1;
    std::vector<GgdClassParams> class_params;
    std::vector<ShapeSpec> geometry;
    std::uint64_t seed = 0;
};

void validate(const PhantomSpec& spec);

/// Rasterize the geometry; disc membership is center distance <= radius.
/// Every pixel must be covered (start with a background shape).
LabelField render_labels(const PhantomSpec& spec);

/// Draw each pixel independently from its class GGD.
ImageGrid draw_trf(const LabelField& labels, std::span<const GgdClassParams> params,
                   RngStream& rng);

struct DegradeResult {
    ImageGrid y;
    double sigma2 = 0.0;
};

/// Blur and add white Gaussian noise calibrated so that
/// 10 log10(|Hx - mean(Hx)|^2 / (N sigma^2)) equals bsnr_db.
/// An infinite BSNR yields the noiseless y = Hx.
DegradeResult degrade(const ImageGrid& x, const CyclicBlurOperator& op, double bsnr_db,
                      RngStream& rng);

// Named presets reproducing the synthetic experiment geometries.
PhantomSpec preset_group1(std::size_t rows, std::size_t cols); // bright disc in speckle
PhantomSpec preset_group2(std::size_t rows, std::size_t cols); // two dark discs
PhantomSpec preset_group3(std::size_t rows, std::size_t cols); // skin band + tumor ellipse
/// Two equal vertical bands with the given class parameters.
PhantomSpec preset_two_band(std::size_t rows, std::size_t cols, GgdClassParams left,
                            GgdClassParams right);
/// Single-class i.i.d. field.
PhantomSpec preset_iid(std::size_t rows, std::size_t cols, GgdClassParams params);

struct PhantomOutput {
    ImageGrid x;
    LabelField z;
    ImageGrid y;
    ImageGrid psf;
    double sigma2 = 0.0;
};

/// Full pipeline: labels, TRF, Gaussian PSF blur, BSNR-calibrated noise.
PhantomOutput simulate(const PhantomSpec& spec, double bsnr_db, std::size_t psf_size = 5,
                       double psf_variance = 3.0);

} // namespace usdeconv
