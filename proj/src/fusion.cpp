#include "scene3d/fusion.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "scene3d/kernels.hpp"
#include "scene3d/rng.hpp"

namespace scene3d::fusion {

const char* provenance_name(Provenance p) {
    switch (p) {
        case Provenance::visual: return "visual";
        case Provenance::geometry: return "geometry";
        case Provenance::visual_merged: return "visual-merged";
        case Provenance::geometry_merged: return "geometry-merged";
        case Provenance::fused: return "fused";
    }
    return "unknown";
}

std::pair<int, int> patch_shape(int h, int w, int p) {
    if (h <= 0 || w <= 0 || p <= 0)
        throw std::invalid_argument("patch_shape: dimensions must be positive");
    return {h / p, w / p};
}

std::pair<int, int> merged_shape(int h, int w, int p) { return patch_shape(h, w, 2 * p); }

double activate(Activation a, double x) {
    switch (a) {
        case Activation::identity: return x;
        case Activation::gelu: return 0.5 * x * (1.0 + std::erf(x * M_SQRT1_2));
    }
    return x;
}

double activate_derivative(Activation a, double x) {
    switch (a) {
        case Activation::identity: return 1.0;
        case Activation::gelu: {
            const double phi = std::exp(-0.5 * x * x) / std::sqrt(2.0 * M_PI);
            return 0.5 * (1.0 + std::erf(x * M_SQRT1_2)) + x * phi;
        }
    }
    return 1.0;
}

TwoLayerMlp TwoLayerMlp::seeded(int channels, int hidden_dim, uint64_t seed,
                                Activation activation) {
    if (channels <= 0 || hidden_dim <= 0)
        throw std::invalid_argument("TwoLayerMlp::seeded: dimensions must be positive");
    TwoLayerMlp mlp;
    mlp.input_dim = 4 * channels;
    mlp.hidden_dim = hidden_dim;
    mlp.output_dim = channels;
    mlp.activation = activation;
    Xoshiro256 rng(seed);
    auto fill = [&rng](std::vector<double>& v, size_t n) {
        v.resize(n);
        for (double& x : v) x = rng.uniform(-0.1, 0.1);
    };
    fill(mlp.w1, static_cast<size_t>(hidden_dim) * static_cast<size_t>(mlp.input_dim));
    fill(mlp.b1, static_cast<size_t>(hidden_dim));
    fill(mlp.w2, static_cast<size_t>(channels) * static_cast<size_t>(hidden_dim));
    fill(mlp.b2, static_cast<size_t>(channels));
    return mlp;
}

void TwoLayerMlp::forward(std::span<const double> input, std::span<double> hidden_scratch,
                          std::span<double> output) const {
    if (static_cast<int>(input.size()) != input_dim ||
        static_cast<int>(hidden_scratch.size()) != hidden_dim ||
        static_cast<int>(output.size()) != output_dim)
        throw std::invalid_argument("TwoLayerMlp::forward: size mismatch");
    kernels::gemv(w1.data(), static_cast<size_t>(hidden_dim), static_cast<size_t>(input_dim),
                  input.data(), b1.data(), hidden_scratch.data());
    for (double& h : hidden_scratch) h = activate(activation, h);
    kernels::gemv(w2.data(), static_cast<size_t>(output_dim), static_cast<size_t>(hidden_dim),
                  hidden_scratch.data(), b2.data(), output.data());
}

MergedGrid merge_2x2(const PatchGrid& grid, const TwoLayerMlp& mlp) {
    if (grid.rows < 2 || grid.cols < 2 || grid.rows % 2 != 0 || grid.cols % 2 != 0)
        throw std::invalid_argument("merge_2x2: grid rows/cols must be even and >= 2");
    if (mlp.input_dim != 4 * grid.channels)
        throw std::invalid_argument("merge_2x2: MLP input arity must be 4 * channels");
    if (mlp.output_dim != grid.channels)
        throw std::invalid_argument("merge_2x2: MLP output arity must equal channels");

    MergedGrid out;
    out.rows = grid.rows / 2;
    out.cols = grid.cols / 2;
    out.channels = grid.channels;
    out.tag = grid.tag == Provenance::geometry ? Provenance::geometry_merged
                                               : Provenance::visual_merged;
    out.data.resize(static_cast<size_t>(out.rows) * out.cols * out.channels);

    const int c = grid.channels;
    std::vector<double> block(static_cast<size_t>(4) * c);
    std::vector<double> hidden(static_cast<size_t>(mlp.hidden_dim));
    for (int r = 0; r < out.rows; ++r) {
        for (int col = 0; col < out.cols; ++col) {
            // Row-major within the 2x2 block: (2r,2c), (2r,2c+1), (2r+1,2c), (2r+1,2c+1).
            const std::span<const double> parts[4] = {
                grid.at(2 * r, 2 * col), grid.at(2 * r, 2 * col + 1),
                grid.at(2 * r + 1, 2 * col), grid.at(2 * r + 1, 2 * col + 1)};
            for (int q = 0; q < 4; ++q)
                std::copy(parts[q].begin(), parts[q].end(),
                          block.begin() + static_cast<size_t>(q) * c);
            double* dst = out.data.data() + (static_cast<size_t>(r) * out.cols + col) * c;
            mlp.forward(block, hidden, {dst, static_cast<size_t>(c)});
        }
    }
    return out;
}

MergedGrid fuse(const MergedGrid& geo, const MergedGrid& vis) {
    if (geo.rows != vis.rows || geo.cols != vis.cols || geo.channels != vis.channels)
        throw std::invalid_argument("fuse: shape mismatch");
    MergedGrid out;
    out.rows = geo.rows;
    out.cols = geo.cols;
    out.channels = geo.channels;
    out.tag = Provenance::fused;
    out.data.resize(geo.data.size());
    kernels::add_arrays(geo.data.data(), vis.data.data(), out.data.data(), out.data.size());
    return out;
}

double mlp_gradient_check(const TwoLayerMlp& mlp, std::span<const double> input) {
    if (static_cast<int>(input.size()) != mlp.input_dim)
        throw std::invalid_argument("mlp_gradient_check: input size mismatch");

    const auto in_dim = static_cast<size_t>(mlp.input_dim);
    const auto hid = static_cast<size_t>(mlp.hidden_dim);
    const auto out_dim = static_cast<size_t>(mlp.output_dim);

    // Analytic gradients of L = sum(outputs).
    std::vector<double> z(hid), h(hid);
    kernels::gemv(mlp.w1.data(), hid, in_dim, input.data(), mlp.b1.data(), z.data());
    for (size_t i = 0; i < hid; ++i) h[i] = activate(mlp.activation, z[i]);

    std::vector<double> grad_b2(out_dim, 1.0);
    std::vector<double> grad_w2(out_dim * hid);
    for (size_t i = 0; i < out_dim; ++i)
        for (size_t j = 0; j < hid; ++j) grad_w2[i * hid + j] = h[j];

    std::vector<double> grad_h(hid, 0.0);
    for (size_t j = 0; j < hid; ++j)
        for (size_t i = 0; i < out_dim; ++i) grad_h[j] += mlp.w2[i * hid + j];
    std::vector<double> grad_b1(hid);
    for (size_t j = 0; j < hid; ++j)
        grad_b1[j] = grad_h[j] * activate_derivative(mlp.activation, z[j]);
    std::vector<double> grad_w1(hid * in_dim);
    for (size_t j = 0; j < hid; ++j)
        for (size_t k = 0; k < in_dim; ++k) grad_w1[j * in_dim + k] = grad_b1[j] * input[k];

    // Central finite differences over every parameter.
    TwoLayerMlp probe = mlp;
    std::vector<double> hidden_scratch(hid), output(out_dim);
    auto loss = [&]() {
        probe.forward(input, hidden_scratch, output);
        double l = 0.0;
        for (double v : output) l += v;
        return l;
    };
    constexpr double kStep = 1e-5;
    double max_rel = 0.0;
    auto check = [&](std::vector<double>& params, const std::vector<double>& analytic) {
        for (size_t i = 0; i < params.size(); ++i) {
            const double saved = params[i];
            params[i] = saved + kStep;
            const double up = loss();
            params[i] = saved - kStep;
            const double down = loss();
            params[i] = saved;
            const double numeric = (up - down) / (2.0 * kStep);
            const double denom = std::max({std::abs(analytic[i]), std::abs(numeric), 1.0});
            max_rel = std::max(max_rel, std::abs(numeric - analytic[i]) / denom);
        }
    };
    check(probe.w1, grad_w1);
    check(probe.b1, grad_b1);
    check(probe.w2, grad_w2);
    check(probe.b2, grad_b2);
    return max_rel;
}

PatchGrid seeded_grid(int rows, int cols, int channels, Provenance tag, uint64_t seed) {
    if (rows <= 0 || cols <= 0 || channels <= 0)
        throw std::invalid_argument("seeded_grid: dimensions must be positive");
    PatchGrid grid;
    grid.rows = rows;
    grid.cols = cols;
    grid.channels = channels;
    grid.tag = tag;
    grid.data.resize(static_cast<size_t>(rows) * cols * channels);
    Xoshiro256 rng(seed);
    for (double& v : grid.data) v = rng.uniform(-1.0, 1.0);
    return grid;
}

Expected<PatchGrid> load_grid(const std::string& path) {
    std::ifstream in(path);
    if (!in) return Unexpected("cannot open grid file: " + path);
    PatchGrid grid;
    std::string tag;
    if (!(in >> grid.rows >> grid.cols >> grid.channels >> tag))
        return Unexpected("malformed grid header in " + path);
    if (grid.rows <= 0 || grid.cols <= 0 || grid.channels <= 0)
        return Unexpected("non-positive grid shape in " + path);
    if (tag == "visual")
        grid.tag = Provenance::visual;
    else if (tag == "geometry")
        grid.tag = Provenance::geometry;
    else
        return Unexpected("unknown grid tag \"" + tag + "\" in " + path);
    const size_t n = static_cast<size_t>(grid.rows) * grid.cols * grid.channels;
    grid.data.resize(n);
    for (size_t i = 0; i < n; ++i) {
        if (!(in >> grid.data[i]))
            return Unexpected("grid file " + path + " ended after " + std::to_string(i) + " of " +
                              std::to_string(n) + " values");
    }
    return grid;
}

Expected<bool> save_grid(const PatchGrid& grid, const std::string& path) {
    std::ofstream out(path);
    if (!out) return Unexpected("cannot write grid file: " + path);
    out << grid.rows << ' ' << grid.cols << ' ' << grid.channels << ' '
        << provenance_name(grid.tag) << '\n';
    out.precision(17);
    for (double v : grid.data) out << v << '\n';
    return !out.fail() ? Expected<bool>(true) : Expected<bool>(Unexpected("write failed: " + path));
}

}  // namespace scene3d::fusion
