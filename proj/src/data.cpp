#include "qcsam/data.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>

#include "qcsam/rng.hpp"

namespace qcsam::data {

namespace {

constexpr double kPi = 3.14159265358979323846264338327950288;

std::uint32_t read_be32(std::ifstream& f, const std::string& path, std::size_t offset) {
    unsigned char b[4];
    f.read(reinterpret_cast<char*>(b), 4);
    if (!f) {
        throw FormatError(path + ": truncated header at byte offset " + std::to_string(offset));
    }
    return (std::uint32_t{b[0]} << 24) | (std::uint32_t{b[1]} << 16) |
           (std::uint32_t{b[2]} << 8) | std::uint32_t{b[3]};
}

} // namespace

ImageSet load_idx(const std::string& images_path, const std::string& labels_path) {
    std::ifstream fi(images_path, std::ios::binary);
    if (!fi) throw DataError("cannot open image file: " + images_path);
    std::ifstream fl(labels_path, std::ios::binary);
    if (!fl) throw DataError("cannot open label file: " + labels_path);

    const std::uint32_t magic_i = read_be32(fi, images_path, 0);
    if (magic_i != 0x00000803u) {
        throw FormatError(images_path + ": bad image magic at byte offset 0 (expected 0x803)");
    }
    const std::uint32_t n_images = read_be32(fi, images_path, 4);
    const std::uint32_t rows = read_be32(fi, images_path, 8);
    const std::uint32_t cols = read_be32(fi, images_path, 12);

    const std::uint32_t magic_l = read_be32(fl, labels_path, 0);
    if (magic_l != 0x00000801u) {
        throw FormatError(labels_path + ": bad label magic at byte offset 0 (expected 0x801)");
    }
    const std::uint32_t n_labels = read_be32(fl, labels_path, 4);
    if (n_images != n_labels) {
        throw FormatError("image/label counts differ: " + std::to_string(n_images) + " vs " +
                          std::to_string(n_labels));
    }
    if (rows == 0 || cols == 0 || rows > 4096 || cols > 4096 || n_images > 100000000u) {
        throw FormatError(images_path + ": implausible header dimensions " +
                          std::to_string(n_images) + " x " + std::to_string(rows) + " x " +
                          std::to_string(cols));
    }

    ImageSet set;
    set.rows = static_cast<int>(rows);
    set.cols = static_cast<int>(cols);
    const std::size_t pix_bytes = std::size_t{n_images} * rows * cols;
    set.pixels.resize(pix_bytes);
    fi.read(reinterpret_cast<char*>(set.pixels.data()), static_cast<std::streamsize>(pix_bytes));
    if (static_cast<std::size_t>(fi.gcount()) != pix_bytes) {
        throw FormatError(images_path + ": truncated payload, expected " +
                          std::to_string(pix_bytes) + " bytes after offset 16, got " +
                          std::to_string(fi.gcount()));
    }
    set.labels.resize(n_labels);
    fl.read(reinterpret_cast<char*>(set.labels.data()), static_cast<std::streamsize>(n_labels));
    if (static_cast<std::size_t>(fl.gcount()) != n_labels) {
        throw FormatError(labels_path + ": truncated payload, expected " +
                          std::to_string(n_labels) + " bytes after offset 8, got " +
                          std::to_string(fl.gcount()));
    }
    return set;
}

namespace {

ImageSet pick(const ImageSet& src, const std::vector<int>& classes, int per_class, Rng& rng) {
    ImageSet out;
    out.rows = src.rows;
    out.cols = src.cols;
    const std::size_t img_bytes = static_cast<std::size_t>(src.rows) * src.cols;
    for (std::size_t ci = 0; ci < classes.size(); ++ci) {
        std::vector<std::size_t> idx;
        for (std::size_t i = 0; i < src.count(); ++i) {
            if (src.labels[i] == classes[ci]) idx.push_back(i);
        }
        if (static_cast<int>(idx.size()) < per_class) {
            throw DataError("class " + std::to_string(classes[ci]) + " has only " +
                            std::to_string(idx.size()) + " samples, need " +
                            std::to_string(per_class));
        }
        rng.shuffle(idx);
        idx.resize(per_class);
        std::sort(idx.begin(), idx.end());
        for (std::size_t i : idx) {
            const std::uint8_t* p = src.image(i);
            out.pixels.insert(out.pixels.end(), p, p + img_bytes);
            out.labels.push_back(static_cast<std::uint8_t>(ci));
        }
    }
    return out;
}

} // namespace

Subsample subsample(const Dataset& set, const std::vector<int>& classes, int per_class_train,
                    int per_class_test, std::uint64_t seed) {
    if (classes.empty()) throw DataError("class list is empty");
    Rng root(seed);
    Rng r_train = root.fork(0x7261696e);
    Rng r_test = root.fork(0x74657374);
    Subsample s;
    s.train = pick(set.train, classes, per_class_train, r_train);
    s.test = pick(set.test, classes, per_class_test, r_test);
    return s;
}

std::vector<std::vector<double>> patchify(const ImageSet& set, std::size_t index, Grid grid) {
    if (grid.rows < 1 || grid.cols < 1 || set.rows % grid.rows != 0 ||
        set.cols % grid.cols != 0) {
        throw ConfigError("image size " + std::to_string(set.rows) + "x" +
                          std::to_string(set.cols) + " is not divisible by the patch grid");
    }
    const int ph = set.rows / grid.rows;
    const int pw = set.cols / grid.cols;
    const std::uint8_t* img = set.image(index);
    std::vector<std::vector<double>> patches;
    patches.reserve(static_cast<std::size_t>(grid.rows) * grid.cols);
    for (int gr = 0; gr < grid.rows; ++gr) {
        for (int gc = 0; gc < grid.cols; ++gc) {
            std::vector<double> patch;
            patch.reserve(static_cast<std::size_t>(ph) * pw);
            for (int r = 0; r < ph; ++r) {
                const std::uint8_t* row = img + (gr * ph + r) * static_cast<std::size_t>(set.cols) +
                                          gc * static_cast<std::size_t>(pw);
                for (int c = 0; c < pw; ++c) patch.push_back(row[c] / 255.0);
            }
            patches.push_back(std::move(patch));
        }
    }
    return patches;
}

void symmetric_eigen(std::vector<double> a, int dim, std::vector<double>& eigenvalues,
                     std::vector<double>& eigenvectors) {
    // Cyclic Jacobi with a fixed sweep order; deterministic across platforms.
    std::vector<double> v(static_cast<std::size_t>(dim) * dim, 0.0);
    for (int i = 0; i < dim; ++i) v[static_cast<std::size_t>(i) * dim + i] = 1.0;

    auto at = [&](std::vector<double>& mtx, int r, int c) -> double& {
        return mtx[static_cast<std::size_t>(r) * dim + c];
    };

    for (int sweep = 0; sweep < 64; ++sweep) {
        double off = 0.0;
        for (int p = 0; p < dim; ++p) {
            for (int q = p + 1; q < dim; ++q) off += at(a, p, q) * at(a, p, q);
        }
        if (off < 1e-24) break;
        for (int p = 0; p < dim; ++p) {
            for (int q = p + 1; q < dim; ++q) {
                const double apq = at(a, p, q);
                if (std::abs(apq) < 1e-300) continue;
                const double theta = (at(a, q, q) - at(a, p, p)) / (2.0 * apq);
                const double tsign = theta >= 0.0 ? 1.0 : -1.0;
                const double t = tsign / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                for (int i = 0; i < dim; ++i) {
                    const double aip = at(a, i, p), aiq = at(a, i, q);
                    at(a, i, p) = c * aip - s * aiq;
                    at(a, i, q) = s * aip + c * aiq;
                }
                for (int i = 0; i < dim; ++i) {
                    const double api = at(a, p, i), aqi = at(a, q, i);
                    at(a, p, i) = c * api - s * aqi;
                    at(a, q, i) = s * api + c * aqi;
                }
                for (int i = 0; i < dim; ++i) {
                    const double vpi = at(v, p, i), vqi = at(v, q, i);
                    at(v, p, i) = c * vpi - s * vqi;
                    at(v, q, i) = s * vpi + c * vqi;
                }
            }
        }
    }

    std::vector<int> order(dim);
    for (int i = 0; i < dim; ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(), [&](int x, int y) {
        return at(a, x, x) > at(a, y, y);
    });

    eigenvalues.resize(dim);
    eigenvectors.assign(static_cast<std::size_t>(dim) * dim, 0.0);
    for (int i = 0; i < dim; ++i) {
        eigenvalues[i] = at(a, order[i], order[i]);
        for (int j = 0; j < dim; ++j) {
            eigenvectors[static_cast<std::size_t>(i) * dim + j] = at(v, order[i], j);
        }
    }
}

PcaModel fit_pca(const std::vector<std::vector<std::vector<double>>>& patches_by_position,
                 Grid grid, int n_features) {
    if (patches_by_position.empty()) throw DataError("no patch positions to fit");
    PcaModel m;
    m.grid = grid;
    m.n_features = n_features;
    m.patch_dim = static_cast<int>(patches_by_position[0].at(0).size());

    for (std::size_t pos = 0; pos < patches_by_position.size(); ++pos) {
        const auto& samples = patches_by_position[pos];
        const int dim = m.patch_dim;
        if (static_cast<int>(samples.size()) < n_features) {
            throw DataError("patch position " + std::to_string(pos) + " has " +
                            std::to_string(samples.size()) + " samples, need at least " +
                            std::to_string(n_features));
        }

        PositionPca pp;
        pp.mean.assign(dim, 0.0);
        for (const auto& x : samples) {
            for (int d = 0; d < dim; ++d) pp.mean[d] += x[d];
        }
        for (double& mu : pp.mean) mu /= static_cast<double>(samples.size());

        std::vector<double> cov(static_cast<std::size_t>(dim) * dim, 0.0);
        for (const auto& x : samples) {
            for (int r = 0; r < dim; ++r) {
                const double xr = x[r] - pp.mean[r];
                for (int c = r; c < dim; ++c) {
                    cov[static_cast<std::size_t>(r) * dim + c] += xr * (x[c] - pp.mean[c]);
                }
            }
        }
        for (int r = 0; r < dim; ++r) {
            for (int c = r; c < dim; ++c) {
                const double val = cov[static_cast<std::size_t>(r) * dim + c] /
                                   static_cast<double>(samples.size());
                cov[static_cast<std::size_t>(r) * dim + c] = val;
                cov[static_cast<std::size_t>(c) * dim + r] = val;
            }
        }

        std::vector<double> evals, evecs;
        symmetric_eigen(std::move(cov), dim, evals, evecs);

        const double rank_tol = std::max(evals.empty() ? 0.0 : evals[0], 0.0) * 1e-12;
        int rank = 0;
        for (double ev : evals) {
            if (ev > rank_tol && ev > 0.0) ++rank;
        }
        if (rank < n_features) {
            throw DataError("patch position " + std::to_string(pos) + " has numerical rank " +
                            std::to_string(rank) + " < " + std::to_string(n_features) +
                            " requested features; use a smaller feature count");
        }

        pp.components.resize(static_cast<std::size_t>(n_features) * dim);
        for (int f = 0; f < n_features; ++f) {
            const double* row = evecs.data() + static_cast<std::size_t>(f) * dim;
            // Deterministic sign: largest-magnitude entry made positive.
            int arg = 0;
            for (int d = 1; d < dim; ++d) {
                if (std::abs(row[d]) > std::abs(row[arg])) arg = d;
            }
            const double flip = row[arg] < 0.0 ? -1.0 : 1.0;
            for (int d = 0; d < dim; ++d) {
                pp.components[static_cast<std::size_t>(f) * dim + d] = flip * row[d];
            }
        }

        pp.feat_min.assign(n_features, std::numeric_limits<double>::infinity());
        pp.feat_max.assign(n_features, -std::numeric_limits<double>::infinity());
        for (const auto& x : samples) {
            for (int f = 0; f < n_features; ++f) {
                double acc = 0.0;
                const double* comp = pp.components.data() + static_cast<std::size_t>(f) * dim;
                for (int d = 0; d < dim; ++d) acc += comp[d] * (x[d] - pp.mean[d]);
                pp.feat_min[f] = std::min(pp.feat_min[f], acc);
                pp.feat_max[f] = std::max(pp.feat_max[f], acc);
            }
        }
        m.positions.push_back(std::move(pp));
    }
    m.fitted = true;
    return m;
}

PcaModel fit_pca(const ImageSet& train, Grid grid, int n_features) {
    const std::size_t n_pos = static_cast<std::size_t>(grid.rows) * grid.cols;
    std::vector<std::vector<std::vector<double>>> by_pos(n_pos);
    for (std::size_t i = 0; i < train.count(); ++i) {
        auto patches = patchify(train, i, grid);
        for (std::size_t p = 0; p < n_pos; ++p) by_pos[p].push_back(std::move(patches[p]));
    }
    return fit_pca(by_pos, grid, n_features);
}

std::vector<std::vector<double>> prepare_head(const ImageSet& set, std::size_t index,
                                              const PcaModel& pca) {
    if (!pca.fitted) throw StateError("PCA model is not fitted");
    const auto patches = patchify(set, index, pca.grid);
    std::vector<std::vector<double>> features;
    features.reserve(patches.size());
    for (std::size_t p = 0; p < patches.size(); ++p) {
        const PositionPca& pp = pca.positions[p];
        std::vector<double> f(pca.n_features);
        for (int k = 0; k < pca.n_features; ++k) {
            double acc = 0.0;
            const double* comp = pp.components.data() + static_cast<std::size_t>(k) * pca.patch_dim;
            for (int d = 0; d < pca.patch_dim; ++d) acc += comp[d] * (patches[p][d] - pp.mean[d]);
            const double span = pp.feat_max[k] - pp.feat_min[k];
            if (span < 1e-12) {
                f[k] = 0.0; // constant training feature carries no information
            } else {
                const double clamped = std::clamp(acc, pp.feat_min[k], pp.feat_max[k]);
                f[k] = (clamped - pp.feat_min[k]) / span * kPi;
            }
        }
        features.push_back(std::move(f));
    }
    return features;
}

std::vector<model::Sample> prepare_samples(const ImageSet& set,
                                           const std::vector<PcaModel>& per_head_pca) {
    std::vector<model::Sample> out;
    out.reserve(set.count());
    for (std::size_t i = 0; i < set.count(); ++i) {
        model::Sample s;
        s.label = set.labels[i];
        for (const auto& pca : per_head_pca) s.head_features.push_back(prepare_head(set, i, pca));
        out.push_back(std::move(s));
    }
    return out;
}

} // namespace qcsam::data
