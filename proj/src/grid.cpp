#include "usdeconv/grid.hpp"

#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace usdeconv {

namespace {

constexpr char kMatrixMagic[4] = {'G', 'P', 'D', 'M'};
constexpr char kLabelMagic[4] = {'G', 'P', 'D', 'L'};
constexpr std::uint32_t kFormatVersion = 1;

void check_dims(std::size_t rows, std::size_t cols) {
    if (rows == 0 || cols == 0)
        throw std::invalid_argument("grid: empty dimension");
    if (rows > std::numeric_limits<std::uint32_t>::max() ||
        cols > std::numeric_limits<std::uint32_t>::max() ||
        rows > std::numeric_limits<std::size_t>::max() / cols)
        throw std::invalid_argument("grid: dimension overflow");
}

void check_finite(const std::vector<double>& data) {
    for (double v : data)
        if (!std::isfinite(v))
            throw std::invalid_argument("grid: non-finite payload");
}

void write_u32(std::ostream& os, std::uint32_t v) {
    unsigned char b[4] = {static_cast<unsigned char>(v & 0xff),
                          static_cast<unsigned char>((v >> 8) & 0xff),
                          static_cast<unsigned char>((v >> 16) & 0xff),
                          static_cast<unsigned char>((v >> 24) & 0xff)};
    os.write(reinterpret_cast<const char*>(b), 4);
}

std::uint32_t read_u32(std::istream& is) {
    unsigned char b[4];
    is.read(reinterpret_cast<char*>(b), 4);
    if (!is) throw std::runtime_error("grid: truncated header");
    return static_cast<std::uint32_t>(b[0]) | (static_cast<std::uint32_t>(b[1]) << 8) |
           (static_cast<std::uint32_t>(b[2]) << 16) | (static_cast<std::uint32_t>(b[3]) << 24);
}

void write_f64(std::ostream& os, double v) {
    std::uint64_t bits;
    std::memcpy(&bits, &v, 8);
    unsigned char b[8];
    for (int i = 0; i < 8; ++i) b[i] = static_cast<unsigned char>((bits >> (8 * i)) & 0xff);
    os.write(reinterpret_cast<const char*>(b), 8);
}

double read_f64(std::istream& is) {
    unsigned char b[8];
    is.read(reinterpret_cast<char*>(b), 8);
    if (!is) throw std::runtime_error("grid: truncated payload");
    std::uint64_t bits = 0;
    for (int i = 0; i < 8; ++i) bits |= static_cast<std::uint64_t>(b[i]) << (8 * i);
    double v;
    std::memcpy(&v, &bits, 8);
    return v;
}

void read_magic(std::istream& is, const char expected[4], const char* what) {
    char m[4];
    is.read(m, 4);
    if (!is || std::memcmp(m, expected, 4) != 0)
        throw std::runtime_error(std::string("grid: bad magic for ") + what);
    std::uint32_t version = read_u32(is);
    if (version != kFormatVersion)
        throw std::runtime_error("grid: unsupported format version");
}

} // namespace

ImageGrid::ImageGrid(std::size_t r, std::size_t c, double fill) : rows(r), cols(c) {
    check_dims(r, c);
    if (!std::isfinite(fill)) throw std::invalid_argument("grid: non-finite payload");
    data.assign(r * c, fill);
}

ImageGrid::ImageGrid(std::size_t r, std::size_t c, std::vector<double> values)
    : rows(r), cols(c), data(std::move(values)) {
    check_dims(r, c);
    if (data.size() != r * c) throw std::invalid_argument("grid: payload size mismatch");
    check_finite(data);
}

LabelField::LabelField(std::size_t r, std::size_t c, int k, int fill)
    : rows(r), cols(c), k_classes(k) {
    check_dims(r, c);
    if (k < 1) throw std::invalid_argument("labels: k_classes must be >= 1");
    if (fill < 1 || fill > k) throw std::invalid_argument("labels: label out of range");
    labels.assign(r * c, fill);
}

LabelField::LabelField(std::size_t r, std::size_t c, int k, std::vector<int> values)
    : rows(r), cols(c), k_classes(k), labels(std::move(values)) {
    check_dims(r, c);
    if (k < 1) throw std::invalid_argument("labels: k_classes must be >= 1");
    if (labels.size() != r * c) throw std::invalid_argument("labels: payload size mismatch");
    for (int v : labels)
        if (v < 1 || v > k) throw std::invalid_argument("labels: label out of range");
}

ImageGrid read_matrix(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw std::runtime_error("grid: cannot open " + path);
    read_magic(is, kMatrixMagic, "matrix");
    std::uint32_t rows = read_u32(is);
    std::uint32_t cols = read_u32(is);
    check_dims(rows, cols);
    std::vector<double> data(static_cast<std::size_t>(rows) * cols);
    for (double& v : data) v = read_f64(is);
    check_finite(data);
    return ImageGrid(rows, cols, std::move(data));
}

void write_matrix(const std::string& path, const ImageGrid& grid) {
    check_dims(grid.rows, grid.cols);
    if (grid.data.size() != grid.rows * grid.cols)
        throw std::invalid_argument("grid: payload size mismatch");
    check_finite(grid.data);
    std::ofstream os(path, std::ios::binary | std::ios::trunc);
    if (!os) throw std::runtime_error("grid: cannot open " + path + " for writing");
    os.write(kMatrixMagic, 4);
    write_u32(os, kFormatVersion);
    write_u32(os, static_cast<std::uint32_t>(grid.rows));
    write_u32(os, static_cast<std::uint32_t>(grid.cols));
    for (double v : grid.data) write_f64(os, v);
    if (!os) throw std::runtime_error("grid: write failure on " + path);
}

LabelField read_labels(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw std::runtime_error("labels: cannot open " + path);
    read_magic(is, kLabelMagic, "labels");
    std::uint32_t rows = read_u32(is);
    std::uint32_t cols = read_u32(is);
    check_dims(rows, cols);
    std::uint32_t k = read_u32(is);
    if (k < 1) throw std::runtime_error("labels: k_classes must be >= 1");
    std::vector<int> labels(static_cast<std::size_t>(rows) * cols);
    for (int& v : labels) {
        std::uint32_t raw = read_u32(is);
        if (raw < 1 || raw > k) throw std::runtime_error("labels: label out of range");
        v = static_cast<int>(raw);
    }
    return LabelField(rows, cols, static_cast<int>(k), std::move(labels));
}

void write_labels(const std::string& path, const LabelField& field) {
    check_dims(field.rows, field.cols);
    if (field.labels.size() != field.rows * field.cols)
        throw std::invalid_argument("labels: payload size mismatch");
    for (int v : field.labels)
        if (v < 1 || v > field.k_classes)
            throw std::invalid_argument("labels: label out of range");
    std::ofstream os(path, std::ios::binary | std::ios::trunc);
    if (!os) throw std::runtime_error("labels: cannot open " + path + " for writing");
    os.write(kLabelMagic, 4);
    write_u32(os, kFormatVersion);
    write_u32(os, static_cast<std::uint32_t>(field.rows));
    write_u32(os, static_cast<std::uint32_t>(field.cols));
    write_u32(os, static_cast<std::uint32_t>(field.k_classes));
    for (int v : field.labels) write_u32(os, static_cast<std::uint32_t>(v));
    if (!os) throw std::runtime_error("labels: write failure on " + path);
}

void write_csv(const std::string& path, const ImageGrid& grid) {
    std::ofstream os(path, std::ios::trunc);
    if (!os) throw std::runtime_error("grid: cannot open " + path + " for writing");
    os.precision(17);
    for (std::size_t r = 0; r < grid.rows; ++r) {
        for (std::size_t c = 0; c < grid.cols; ++c) {
            if (c) os << ',';
            os << grid.at(r, c);
        }
        os << '\n';
    }
    if (!os) throw std::runtime_error("grid: write failure on " + path);
}

std::pair<double, double> extract_region(const ImageGrid& grid, const RegionMask& mask) {
    if (mask.height == 0 || mask.width == 0 ||
        mask.row0 + mask.height > grid.rows || mask.col0 + mask.width > grid.cols)
        throw std::invalid_argument("extract_region: mask out of bounds");
    const std::size_t n = mask.height * mask.width;
    if (n < 2) throw std::invalid_argument("extract_region: region area must be >= 2");
    double sum = 0.0;
    for (std::size_t r = 0; r < mask.height; ++r)
        for (std::size_t c = 0; c < mask.width; ++c)
            sum += grid.at(mask.row0 + r, mask.col0 + c);
    const double mean = sum / static_cast<double>(n);
    double ss = 0.0;
    for (std::size_t r = 0; r < mask.height; ++r)
        for (std::size_t c = 0; c < mask.width; ++c) {
            const double d = grid.at(mask.row0 + r, mask.col0 + c) - mean;
            ss += d * d;
        }
    return {mean, std::sqrt(ss / static_cast<double>(n - 1))};
}

} // namespace usdeconv
