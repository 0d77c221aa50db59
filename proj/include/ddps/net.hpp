#pragma once

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <cstring>
#include <istream>
#include <ostream>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "ddps/problems.hpp"
#include "ddps/simplex.hpp"

namespace ddps {

/// Flat parameter vector of a fully-connected network plus its layer widths.
/// Layer l stores a row-major (out x in) weight block followed by out biases.
struct MlpParams {
    std::vector<std::size_t> widths;  // input, hidden..., output
    std::vector<double> theta;

    static std::size_t count_for(const std::vector<std::size_t>& widths) {
        std::size_t n = 0;
        for (std::size_t l = 0; l + 1 < widths.size(); ++l) n += widths[l + 1] * widths[l] + widths[l + 1];
        return n;
    }

    [[nodiscard]] std::size_t input_dim() const { return widths.front(); }
    [[nodiscard]] std::size_t output_dim() const { return widths.back(); }
    [[nodiscard]] std::size_t layers() const { return widths.size() - 1; }

    void validate() const {
        if (widths.size() < 2) throw std::invalid_argument("MlpParams: need at least input and output widths");
        for (std::size_t w : widths)
            if (w == 0) throw std::invalid_argument("MlpParams: zero layer width");
        if (theta.size() != count_for(widths))
            throw std::invalid_argument("MlpParams: parameter count does not match layer widths");
    }

    static MlpParams zeros(std::vector<std::size_t> widths) {
        MlpParams p{std::move(widths), {}};
        p.theta.assign(count_for(p.widths), 0.0);
        return p;
    }

    /// Weights and biases drawn from U(-1/sqrt(fan_in), 1/sqrt(fan_in)).
    template <typename Rng>
    static MlpParams init(std::vector<std::size_t> widths, Rng& rng) {
        MlpParams p = zeros(std::move(widths));
        std::size_t off = 0;
        for (std::size_t l = 0; l < p.layers(); ++l) {
            const std::size_t in = p.widths[l];
            const std::size_t out = p.widths[l + 1];
            const double bound = 1.0 / std::sqrt(static_cast<double>(in));
            std::uniform_real_distribution<double> u(-bound, bound);
            for (std::size_t i = 0; i < out * in + out; ++i) p.theta[off + i] = u(rng);
            off += out * in + out;
        }
        return p;
    }

    friend bool operator==(const MlpParams&, const MlpParams&) = default;
};

/// Synthetic-problem architecture: m preference inputs, two hidden layers of
/// 256 rectified units, d logistic outputs.
inline std::vector<std::size_t> default_widths(std::size_t m, std::size_t d, std::size_t hidden = 256) {
    return {m, hidden, hidden, d};
}

/// Activations kept from a forward pass for the backward sweep.
struct ForwardTrace {
    std::vector<std::vector<double>> inputs;  // input to each layer
    std::vector<std::vector<double>> pre;     // pre-activation of each layer
    std::vector<double> output;
};

inline ForwardTrace forward_trace(const MlpParams& params, std::span<const double> r) {
    if (r.size() != params.input_dim())
        throw std::invalid_argument("forward: expected " + std::to_string(params.input_dim()) + " inputs, got " +
                                    std::to_string(r.size()));
    const std::size_t L = params.layers();
    ForwardTrace tr;
    tr.inputs.reserve(L);
    tr.pre.reserve(L);
    std::vector<double> act(r.begin(), r.end());
    std::size_t off = 0;
    for (std::size_t l = 0; l < L; ++l) {
        const std::size_t in = params.widths[l];
        const std::size_t out = params.widths[l + 1];
        const double* W = params.theta.data() + off;
        const double* b = W + out * in;
        std::vector<double> z(out);
        for (std::size_t o = 0; o < out; ++o) {
            const double* row = W + o * in;
            double acc = b[o];
            for (std::size_t i = 0; i < in; ++i) acc += row[i] * act[i];
            z[o] = acc;
        }
        off += out * in + out;
        tr.inputs.push_back(std::move(act));
        act = z;
        if (l + 1 < L) {
            for (double& a : act) a = std::max(a, 0.0);
        } else {
            for (double& a : act) a = 1.0 / (1.0 + std::exp(-a));
        }
        tr.pre.push_back(std::move(z));
    }
    tr.output = std::move(act);
    return tr;
}

/// Decision vector in [0, 1]^d produced for preference `r`.
inline std::vector<double> forward(const MlpParams& params, const PreferenceVector& r) {
    params.validate();
    return forward_trace(params, r.values()).output;
}

/// Reverse sweep: gradient of a scalar with respect to theta, given its
/// gradient with respect to the network output.
inline std::vector<double> backward(const MlpParams& params, const ForwardTrace& tr, std::span<const double> d_out) {
    const std::size_t L = params.layers();
    std::vector<double> grad(params.theta.size(), 0.0);
    std::vector<std::size_t> offsets(L);
    std::size_t off = 0;
    for (std::size_t l = 0; l < L; ++l) {
        offsets[l] = off;
        off += params.widths[l + 1] * params.widths[l] + params.widths[l + 1];
    }
    // delta = dS/dz for the current layer
    std::vector<double> delta(d_out.size());
    for (std::size_t o = 0; o < delta.size(); ++o) {
        const double y = tr.output[o];
        delta[o] = d_out[o] * y * (1.0 - y);
    }
    for (std::size_t l = L; l-- > 0;) {
        const std::size_t in = params.widths[l];
        const std::size_t out = params.widths[l + 1];
        const double* W = params.theta.data() + offsets[l];
        double* gW = grad.data() + offsets[l];
        double* gb = gW + out * in;
        const auto& x = tr.inputs[l];
        for (std::size_t o = 0; o < out; ++o) {
            const double dz = delta[o];
            gb[o] = dz;
            if (dz == 0.0) continue;
            double* grow = gW + o * in;
            for (std::size_t i = 0; i < in; ++i) grow[i] = dz * x[i];
        }
        if (l == 0) break;
        std::vector<double> prev(in, 0.0);
        for (std::size_t o = 0; o < out; ++o) {
            const double dz = delta[o];
            if (dz == 0.0) continue;
            const double* row = W + o * in;
            for (std::size_t i = 0; i < in; ++i) prev[i] += row[i] * dz;
        }
        const auto& z_prev = tr.pre[l - 1];
        for (std::size_t i = 0; i < in; ++i)
            if (z_prev[i] <= 0.0) prev[i] = 0.0;
        delta = std::move(prev);
    }
    return grad;
}

enum class ScalarizationKind { LinearScalarization, PenaltyBoundary };

struct ScalarizationSpec {
    ScalarizationKind kind = ScalarizationKind::PenaltyBoundary;
    double penalty_theta = 5.0;
    std::vector<double> ideal_point;  // empty means the origin
};

struct ScalarValue {
    double value = 0.0;
    std::vector<double> d_loss;  // gradient with respect to the objective vector
};

/// Scalarized loss and its gradient with respect to the objective vector.
/// Linear: r . L. Penalty boundary: d1 + theta * d2 with d1 the projection of
/// (L - z*) onto r / |r| and d2 the distance from that ray.
inline ScalarValue scalarize_with_gradient(std::span<const double> loss, std::span<const double> r,
                                           const ScalarizationSpec& spec) {
    if (loss.size() != r.size()) throw std::invalid_argument("scalarize: dimension mismatch");
    const std::size_t m = r.size();
    double rnorm = 0.0;
    for (double v : r) rnorm += v * v;
    rnorm = std::sqrt(rnorm);
    if (!(rnorm > 0.0)) throw std::invalid_argument("scalarize: zero preference vector");

    ScalarValue out{0.0, std::vector<double>(m, 0.0)};
    if (spec.kind == ScalarizationKind::LinearScalarization) {
        for (std::size_t k = 0; k < m; ++k) {
            out.value += r[k] * loss[k];
            out.d_loss[k] = r[k];
        }
        return out;
    }
    if (spec.penalty_theta < 0.0) throw std::invalid_argument("scalarize: penalty_theta must be >= 0");
    if (!spec.ideal_point.empty() && spec.ideal_point.size() != m)
        throw std::invalid_argument("scalarize: ideal point dimension mismatch");
    std::vector<double> dir(m), v(m), w(m);
    double d1 = 0.0;
    for (std::size_t k = 0; k < m; ++k) {
        dir[k] = r[k] / rnorm;
        v[k] = loss[k] - (spec.ideal_point.empty() ? 0.0 : spec.ideal_point[k]);
        d1 += v[k] * dir[k];
    }
    double d2 = 0.0;
    for (std::size_t k = 0; k < m; ++k) {
        w[k] = v[k] - d1 * dir[k];
        d2 += w[k] * w[k];
    }
    d2 = std::sqrt(d2);
    out.value = d1 + spec.penalty_theta * d2;
    for (std::size_t k = 0; k < m; ++k)
        out.d_loss[k] = dir[k] + (d2 > 0.0 ? spec.penalty_theta * w[k] / d2 : 0.0);
    return out;
}

inline double scalarize(std::span<const double> loss, const PreferenceVector& r, const ScalarizationSpec& spec) {
    return scalarize_with_gradient(loss, r.values(), spec).value;
}

struct LossGrad {
    double loss = 0.0;
    ObjectiveVector objectives;
    std::vector<double> grad;
};

/// forward -> objectives with Jacobian -> scalarization, then the reverse sweep.
inline LossGrad loss_and_grad(const MlpParams& params, std::span<const double> r, const ScalarizationSpec& spec,
                              const ProblemSpec& problem) {
    if (params.output_dim() != problem.d) throw std::invalid_argument("loss_and_grad: network output != problem d");
    const ForwardTrace tr = forward_trace(params, r);
    const Evaluation ev = evaluate_with_gradient(problem, tr.output);
    const ScalarValue s = scalarize_with_gradient(ev.f, r, spec);
    std::vector<double> d_x(problem.d, 0.0);
    for (std::size_t i = 0; i < ev.jac.rows; ++i) {
        const double ds = s.d_loss[i];
        if (ds == 0.0) continue;
        for (std::size_t j = 0; j < problem.d; ++j) d_x[j] += ds * ev.jac(i, j);
    }
    return {s.value, ev.f, backward(params, tr, d_x)};
}

inline LossGrad loss_and_grad(const MlpParams& params, const PreferenceVector& r, const ScalarizationSpec& spec,
                              const ProblemSpec& problem) {
    return loss_and_grad(params, r.values(), spec, problem);
}

struct OptHyper {
    double lr = 1e-3;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double eps = 1e-8;
};

/// Adaptive-moment optimizer state.
struct OptState {
    std::vector<double> m;
    std::vector<double> v;
    std::size_t t = 0;

    friend bool operator==(const OptState&, const OptState&) = default;
};

/// In-place bias-corrected adaptive-moment update.
inline void optimizer_update(MlpParams& params, std::span<const double> grad, OptState& state, const OptHyper& hyper) {
    if (grad.size() != params.theta.size()) throw std::invalid_argument("optimizer_step: gradient size mismatch");
    for (std::size_t i = 0; i < grad.size(); ++i)
        if (!std::isfinite(grad[i]))
            throw std::domain_error("optimizer_step " + std::to_string(state.t + 1) + ": non-finite gradient entry " +
                                    std::to_string(i));
    if (state.m.size() != grad.size()) {
        state.m.assign(grad.size(), 0.0);
        state.v.assign(grad.size(), 0.0);
    }
    ++state.t;
    const double c1 = 1.0 - std::pow(hyper.beta1, static_cast<double>(state.t));
    const double c2 = 1.0 - std::pow(hyper.beta2, static_cast<double>(state.t));
    const double step = hyper.lr / c1;
    const double inv_c2 = 1.0 / c2;
    for (std::size_t i = 0; i < grad.size(); ++i) {
        const double g = grad[i];
        state.m[i] = hyper.beta1 * state.m[i] + (1.0 - hyper.beta1) * g;
        state.v[i] = hyper.beta2 * state.v[i] + (1.0 - hyper.beta2) * g * g;
        params.theta[i] -= step * state.m[i] / (std::sqrt(state.v[i] * inv_c2) + hyper.eps);
    }
}

struct OptResult {
    MlpParams params;
    OptState state;
};

inline OptResult optimizer_step(MlpParams params, std::span<const double> grad, OptState state,
                                const OptHyper& hyper = {}) {
    optimizer_update(params, grad, state, hyper);
    return {std::move(params), std::move(state)};
}

// Checkpoint layout (all integers and floats little-endian):
//   8 bytes  magic "DDPSMLP1"
//   u64      number of layer widths W
//   W x u64  layer widths
//   u64      parameter count P
//   P x f64  parameters
inline constexpr std::array<char, 8> kCheckpointMagic{'D', 'D', 'P', 'S', 'M', 'L', 'P', '1'};

namespace detail {

template <typename T>
void write_le(std::ostream& os, T value) {
    auto bytes = std::bit_cast<std::array<unsigned char, sizeof(T)>>(value);
    if constexpr (std::endian::native == std::endian::big) std::reverse(bytes.begin(), bytes.end());
    os.write(reinterpret_cast<const char*>(bytes.data()), bytes.size());
}

template <typename T>
T read_le(std::istream& is) {
    std::array<unsigned char, sizeof(T)> bytes{};
    if (!is.read(reinterpret_cast<char*>(bytes.data()), bytes.size()))
        throw std::runtime_error("checkpoint: truncated stream");
    if constexpr (std::endian::native == std::endian::big) std::reverse(bytes.begin(), bytes.end());
    return std::bit_cast<T>(bytes);
}

}  // namespace detail

inline void save_checkpoint(std::ostream& os, const MlpParams& params) {
    params.validate();
    os.write(kCheckpointMagic.data(), kCheckpointMagic.size());
    detail::write_le<std::uint64_t>(os, params.widths.size());
    for (std::size_t w : params.widths) detail::write_le<std::uint64_t>(os, w);
    detail::write_le<std::uint64_t>(os, params.theta.size());
    for (double v : params.theta) detail::write_le<double>(os, v);
}

inline MlpParams load_checkpoint(std::istream& is) {
    std::array<char, 8> magic{};
    if (!is.read(magic.data(), magic.size()) || magic != kCheckpointMagic)
        throw std::runtime_error("checkpoint: bad magic");
    MlpParams p;
    const auto n_widths = detail::read_le<std::uint64_t>(is);
    if (n_widths < 2 || n_widths > 64) throw std::runtime_error("checkpoint: implausible layer count");
    for (std::uint64_t i = 0; i < n_widths; ++i) p.widths.push_back(detail::read_le<std::uint64_t>(is));
    const auto count = detail::read_le<std::uint64_t>(is);
    if (count != MlpParams::count_for(p.widths)) throw std::runtime_error("checkpoint: parameter count mismatch");
    p.theta.resize(count);
    for (auto& v : p.theta) v = detail::read_le<double>(is);
    return p;
}

}  // namespace ddps
