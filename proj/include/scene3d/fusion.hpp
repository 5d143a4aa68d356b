#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "scene3d/expected.hpp"

namespace scene3d::fusion {

enum class Provenance { visual, geometry, visual_merged, geometry_merged, fused };

const char* provenance_name(Provenance p);

// Patch-token grid: rows x cols x channels, row-major with the channel
// fastest. rows = floor(h/p), cols = floor(w/p) for an h x w image with
// patch size p.
struct PatchGrid {
    int rows = 0;
    int cols = 0;
    int channels = 0;
    Provenance tag = Provenance::visual;
    std::vector<double> data;

    std::span<const double> at(int r, int c) const {
        return {data.data() + (static_cast<size_t>(r) * cols + c) * channels,
                static_cast<size_t>(channels)};
    }
};

// Same layout at the merged resolution rows = floor(h/2p), cols = floor(w/2p).
struct MergedGrid {
    int rows = 0;
    int cols = 0;
    int channels = 0;
    Provenance tag = Provenance::fused;
    std::vector<double> data;

    std::span<const double> at(int r, int c) const {
        return {data.data() + (static_cast<size_t>(r) * cols + c) * channels,
                static_cast<size_t>(channels)};
    }
};

std::pair<int, int> patch_shape(int h, int w, int p);   // (floor(h/p), floor(w/p))
std::pair<int, int> merged_shape(int h, int w, int p);  // (floor(h/2p), floor(w/2p))

enum class Activation { gelu, identity };

// Two affine layers with the activation applied after the first layer only.
// Weights are row-major (out x in).
struct TwoLayerMlp {
    int input_dim = 0;   // 4c: one concatenated 2x2 block
    int hidden_dim = 0;
    int output_dim = 0;  // c
    Activation activation = Activation::gelu;
    std::vector<double> w1, b1;  // hidden_dim x input_dim, hidden_dim
    std::vector<double> w2, b2;  // output_dim x hidden_dim, output_dim

    // Uniform parameters in [-0.1, 0.1], reproducible from the seed.
    static TwoLayerMlp seeded(int channels, int hidden_dim, uint64_t seed,
                              Activation activation = Activation::gelu);

    void forward(std::span<const double> input, std::span<double> hidden_scratch,
                 std::span<double> output) const;
};

double activate(Activation a, double x);
double activate_derivative(Activation a, double x);

// Concatenates each 2x2 block (row-major within the block) and maps it
// through the MLP. Requires even rows/cols and mlp.input_dim == 4*channels;
// throws std::invalid_argument otherwise.
MergedGrid merge_2x2(const PatchGrid& grid, const TwoLayerMlp& mlp);

// Elementwise sum of two identically shaped grids; provenance = fused.
MergedGrid fuse(const MergedGrid& geo, const MergedGrid& vis);

// Max relative error between analytic parameter gradients of the scalar
// loss sum(outputs) and central finite differences (step 1e-5).
double mlp_gradient_check(const TwoLayerMlp& mlp, std::span<const double> input);

// Deterministic demo grid with uniform values in [-1, 1).
PatchGrid seeded_grid(int rows, int cols, int channels, Provenance tag, uint64_t seed);

// Flat text format: "rows cols channels tag" header line, then row-major
// values one per line.
Expected<PatchGrid> load_grid(const std::string& path);
Expected<bool> save_grid(const PatchGrid& grid, const std::string& path);

}  // namespace scene3d::fusion
