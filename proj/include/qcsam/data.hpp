#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "qcsam/errors.hpp"
#include "qcsam/model.hpp"

namespace qcsam::data {

// Raw images as loaded from an IDX pair.
struct ImageSet {
    int rows = 0;
    int cols = 0;
    std::vector<std::uint8_t> pixels; // count * rows * cols, row-major
    std::vector<std::uint8_t> labels;

    std::size_t count() const { return labels.size(); }
    const std::uint8_t* image(std::size_t i) const {
        return pixels.data() + i * static_cast<std::size_t>(rows) * cols;
    }
};

// The dataset's own on-disk partitions.
struct Dataset {
    ImageSet train;
    ImageSet test;
};

// Big-endian IDX pair: image magic 0x00000803, label magic 0x00000801.
ImageSet load_idx(const std::string& images_path, const std::string& labels_path);

struct Grid {
    int rows = 2;
    int cols = 2;
    bool operator==(const Grid&) const = default;
};

// Seeded class-balanced subsample; train indices come from the train
// partition and test indices from the test partition.
struct Subsample {
    ImageSet train;
    ImageSet test;
    // labels remapped to 0..C-1 in the order the classes were requested
};

Subsample subsample(const Dataset& set, const std::vector<int>& classes, int per_class_train,
                    int per_class_test, std::uint64_t seed);

// Row-major patches, each flattened row-major and scaled to [0,1] by /255.
std::vector<std::vector<double>> patchify(const ImageSet& set, std::size_t index, Grid grid);

// Fixed (non-trainable) per-patch-position PCA with train-set min/max for the
// final [0, pi] rescale.
struct PositionPca {
    std::vector<double> mean;        // patch_dim
    std::vector<double> components;  // n_features x patch_dim, row-major, orthonormal rows
    std::vector<double> feat_min;    // n_features, over the training split
    std::vector<double> feat_max;
};

struct PcaModel {
    Grid grid;
    int patch_dim = 0;
    int n_features = 0;
    bool fitted = false;
    std::vector<PositionPca> positions;
};

// patches_by_position[p] is the list of training patch vectors at position p.
PcaModel fit_pca(const std::vector<std::vector<std::vector<double>>>& patches_by_position,
                 Grid grid, int n_features);

// Convenience: patchify the whole training set and fit.
PcaModel fit_pca(const ImageSet& train, Grid grid, int n_features);

// Project one image's patches and min-max rescale each feature to [0, pi],
// clamping values outside the training range.
std::vector<std::vector<double>> prepare_head(const ImageSet& set, std::size_t index,
                                              const PcaModel& pca);

// Full per-head preparation of a subsampled split.
std::vector<model::Sample> prepare_samples(const ImageSet& set,
                                           const std::vector<PcaModel>& per_head_pca);

// Deterministic symmetric eigendecomposition (cyclic Jacobi), eigenvalues
// descending, eigenvectors as orthonormal rows. Exposed for tests.
void symmetric_eigen(std::vector<double> a, int dim, std::vector<double>& eigenvalues,
                     std::vector<double>& eigenvectors);

} // namespace qcsam::data
