#include <shadelab/retinex.hpp>

#include <shadelab/error.hpp>
#include <shadelab/image_io.hpp>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace shadelab {

HeatMap::HeatMap(int width, int height, std::vector<double> probs)
    : width_(width), height_(height), probs_(std::move(probs)) {
    if (width <= 0 || height <= 0) throw InvalidArgument("heatmap dimensions must be positive");
    if (probs_.size() != static_cast<std::size_t>(width) * height) {
        throw InvalidArgument("heatmap length does not match width*height");
    }
    for (double p : probs_) {
        if (!(p >= 0.0 && p <= 1.0)) throw InvalidArgument("heatmap value outside [0, 1]");
    }
}

HeatMap::HeatMap(const ScalarField& f)
    : HeatMap(f.width(), f.height(), std::vector<double>(f.data().begin(), f.data().end())) {}

HeatMap read_heatmap(const std::filesystem::path& path) {
    if (path.extension() == ".pfm") return HeatMap(read_pfm_field(path));
    const RawImage raw = read_png_raw(path);
    if (raw.channels != 1) throw IoError(path.string() + ": heatmap PNG must be single-channel");
    const double scale = raw.bit_depth == 16 ? 65535.0 : 255.0;
    std::vector<double> probs(raw.samples.size());
    for (std::size_t i = 0; i < probs.size(); ++i) probs[i] = raw.samples[i] / scale;
    return HeatMap(raw.width, raw.height, std::move(probs));
}

void RetinexParams::validate() const {
    if (!(t >= 0.0)) throw InvalidArgument("retinex threshold t must be >= 0");
    if (!(w_reflectance > 0.0)) throw InvalidArgument("reflectance weight must be > 0");
    if (!(luminance_floor > 0.0)) throw InvalidArgument("luminance floor must be > 0");
    if (!(cg_tolerance > 0.0)) throw InvalidArgument("CG tolerance must be > 0");
    if (max_iterations < 0) throw InvalidArgument("max_iterations must be >= 0");
}

ChromaImage chromaticity(const LinearImage& img) {
    if (img.channels() != 3) throw InvalidArgument("chromaticity needs a 3-channel image");
    ChromaImage out{img.width(), img.height(), {}, {}};
    const std::size_t n = img.pixel_count();
    out.chroma.resize(n);
    out.valid.resize(n);
    auto d = img.data();
    for (std::size_t i = 0; i < n; ++i) {
        const double sum = d[3 * i] + d[3 * i + 1] + d[3 * i + 2];
        if (sum < 1e-6) {
            out.chroma[i] = {0.0, 0.0};
            out.valid[i] = 0;
        } else {
            out.chroma[i] = {d[3 * i] / sum, d[3 * i + 1] / sum};
            out.valid[i] = 1;
        }
    }
    return out;
}

PairWeights retinex_weights(const LinearImage& img, const RetinexParams& params,
                            const HeatMap* heat) {
    params.validate();
    if (params.use_prior && heat == nullptr) {
        throw InvalidArgument("use_prior is set but no heatmap was supplied");
    }
    if (!params.use_prior && heat != nullptr) {
        throw InvalidArgument("a heatmap was supplied but use_prior is not set");
    }
    const int w = img.width();
    const int h = img.height();
    if (heat && (heat->width() != w || heat->height() != h)) {
        throw DimensionMismatch("heatmap and image sizes differ");
    }

    const ChromaImage chroma = chromaticity(img);
    auto weight = [&](std::size_t p, std::size_t q) {
        if (!chroma.valid[p] || !chroma.valid[q]) return 0.0;
        const double dr = chroma.chroma[p][0] - chroma.chroma[q][0];
        const double dg = chroma.chroma[p][1] - chroma.chroma[q][1];
        if (std::sqrt(dr * dr + dg * dg) > params.t) return 0.0;
        if (heat) return params.w_reflectance * (1.0 - ((*heat)[p] + (*heat)[q]) / 2.0);
        return params.w_reflectance;
    };

    PairWeights out{w, h, {}, {}};
    out.horizontal.resize(static_cast<std::size_t>(std::max(0, w - 1)) * h);
    out.vertical.resize(static_cast<std::size_t>(w) * std::max(0, h - 1));
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x + 1 < w; ++x) {
            const std::size_t p = static_cast<std::size_t>(y) * w + x;
            out.horizontal[static_cast<std::size_t>(y) * (w - 1) + x] = weight(p, p + 1);
        }
    }
    for (int y = 0; y + 1 < h; ++y) {
        for (int x = 0; x < w; ++x) {
            const std::size_t p = static_cast<std::size_t>(y) * w + x;
            out.vertical[p] = weight(p, p + w);
        }
    }
    return out;
}

ScalarField log_luminance(const LinearImage& img, double floor) {
    const ScalarField lum = luminance(img);
    std::vector<double> out(lum.size());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = std::log(std::max(lum[i], floor));
    return ScalarField(lum.width(), lum.height(), std::move(out));
}

namespace {

void check_weights(const ScalarField& log_lum, const PairWeights& weights) {
    const int w = log_lum.width();
    const int h = log_lum.height();
    if (weights.width != w || weights.height != h ||
        weights.horizontal.size() != static_cast<std::size_t>(w - 1) * h ||
        weights.vertical.size() != static_cast<std::size_t>(w) * (h - 1)) {
        throw DimensionMismatch("pair weights do not match the image size");
    }
}

// Visits every 4-neighbor pair as fn(p, q, w_pq).
template <typename Fn>
void for_each_pair(const PairWeights& weights, Fn&& fn) {
    const int w = weights.width;
    const int h = weights.height;
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x + 1 < w; ++x) {
            const std::size_t p = static_cast<std::size_t>(y) * w + x;
            fn(p, p + 1, weights.horizontal[static_cast<std::size_t>(y) * (w - 1) + x]);
        }
    }
    for (int y = 0; y + 1 < h; ++y) {
        for (int x = 0; x < w; ++x) {
            const std::size_t p = static_cast<std::size_t>(y) * w + x;
            fn(p, p + w, weights.vertical[p]);
        }
    }
}

double dot(const std::vector<double>& a, const std::vector<double>& b) {
    return std::inner_product(a.begin(), a.end(), b.begin(), 0.0);
}

}  // namespace

double retinex_energy(const ScalarField& log_lum, const PairWeights& weights,
                      std::span<const double> log_shading) {
    check_weights(log_lum, weights);
    if (log_shading.size() != log_lum.size()) {
        throw DimensionMismatch("log shading and image sizes differ");
    }
    double e = 0.0;
    for_each_pair(weights, [&](std::size_t p, std::size_t q, double wpq) {
        const double ds = log_shading[p] - log_shading[q];
        const double dr = (log_lum[p] - log_lum[q]) - ds;
        e += ds * ds + wpq * dr * dr;
    });
    return e;
}

double energy(const LinearImage& img, const ScalarField& log_shading,
              const RetinexParams& params, const HeatMap* heat) {
    if (log_shading.width() != img.width() || log_shading.height() != img.height()) {
        throw DimensionMismatch("log shading and image sizes differ");
    }
    return retinex_energy(log_luminance(img, params.luminance_floor),
                          retinex_weights(img, params, heat), log_shading.data());
}

std::vector<double> solve_log_shading(const ScalarField& log_lum, const PairWeights& weights,
                                      const RetinexParams& params, SolveStats* stats) {
    params.validate();
    check_weights(log_lum, weights);
    const std::size_t n = log_lum.size();

    // Normal equations A s = b with A the graph Laplacian weighted by
    // (1 + w_pq) and b the Laplacian weighted by w_pq applied to i.
    std::vector<double> b(n, 0.0);
    std::vector<double> diag(n, 0.0);
    for_each_pair(weights, [&](std::size_t p, std::size_t q, double wpq) {
        const double g = wpq * (log_lum[p] - log_lum[q]);
        b[p] += g;
        b[q] -= g;
        diag[p] += 1.0 + wpq;
        diag[q] += 1.0 + wpq;
    });
    auto apply = [&](const std::vector<double>& x, std::vector<double>& y) {
        std::fill(y.begin(), y.end(), 0.0);
        for_each_pair(weights, [&](std::size_t p, std::size_t q, double wpq) {
            const double f = (1.0 + wpq) * (x[p] - x[q]);
            y[p] += f;
            y[q] -= f;
        });
    };
    auto precondition = [&](const std::vector<double>& r, std::vector<double>& z) {
        for (std::size_t i = 0; i < n; ++i) z[i] = diag[i] > 0.0 ? r[i] / diag[i] : r[i];
    };

    std::vector<double> x(n, 0.0);
    const double b_norm = std::sqrt(dot(b, b));
    SolveStats local;
    if (b_norm > 0.0) {
        const int cap = params.max_iterations > 0 ? params.max_iterations
                                                  : static_cast<int>(10 * n);
        std::vector<double> r = b;
        std::vector<double> z(n);
        std::vector<double> ap(n);
        precondition(r, z);
        std::vector<double> p = z;
        double rz = dot(r, z);
        double rel = 1.0;
        int k = 0;
        while (k < cap) {
            apply(p, ap);
            const double pap = dot(p, ap);
            if (!(pap > 0.0)) break;
            const double alpha = rz / pap;
            for (std::size_t i = 0; i < n; ++i) {
                x[i] += alpha * p[i];
                r[i] -= alpha * ap[i];
            }
            ++k;
            rel = std::sqrt(dot(r, r)) / b_norm;
            if (rel < params.cg_tolerance) break;
            precondition(r, z);
            const double rz_next = dot(r, z);
            const double beta = rz_next / rz;
            rz = rz_next;
            for (std::size_t i = 0; i < n; ++i) p[i] = z[i] + beta * p[i];
        }

        // Report the true residual, not the recursively updated one.
        apply(x, ap);
        double res_sq = 0.0;
        for (std::size_t i = 0; i < n; ++i) res_sq += (b[i] - ap[i]) * (b[i] - ap[i]);
        local = {k, std::sqrt(res_sq) / b_norm};
        if (rel >= params.cg_tolerance) {
            throw SolverError("conjugate gradients stopped after " + std::to_string(k) +
                                  " iterations with relative residual " +
                                  std::to_string(local.relative_residual),
                              local.relative_residual, k);
        }
    }

    const double mean = std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(n);
    for (auto& v : x) v -= mean;
    if (stats) *stats = local;
    return x;
}

RetinexResult decompose_retinex(const LinearImage& img, const RetinexParams& params,
                                const HeatMap* heat) {
    const PairWeights weights = retinex_weights(img, params, heat);
    const ScalarField log_lum = log_luminance(img, params.luminance_floor);

    RetinexResult result;
    std::vector<double> s = solve_log_shading(log_lum, weights, params, &result.stats);
    result.energy = retinex_energy(log_lum, weights, s);

    std::vector<double> shading(s.size());
    for (std::size_t i = 0; i < s.size(); ++i) shading[i] = std::exp(s[i]);

    const int c = img.channels();
    std::vector<double> refl(img.data().size());
    for (std::size_t i = 0; i < shading.size(); ++i) {
        for (int k = 0; k < c; ++k) refl[i * c + k] = img.data()[i * c + k] / shading[i];
    }

    result.log_shading = ScalarField(img.width(), img.height(), std::move(s));
    result.layers.shading = ScalarField(img.width(), img.height(), std::move(shading));
    result.layers.reflectance = LinearImage(img.width(), img.height(), c, std::move(refl));
    return result;
}

}  // namespace shadelab
