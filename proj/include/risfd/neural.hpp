#pragma once

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "risfd/errors.hpp"
#include "risfd/numerics.hpp"

namespace risfd {

enum class Activation { ReLU, Tanh, Identity };

inline const char* activation_name(Activation a) {
    switch (a) {
        case Activation::ReLU: return "relu";
        case Activation::Tanh: return "tanh";
        case Activation::Identity: return "identity";
    }
    return "?";
}

inline Activation activation_from_name(const std::string& s) {
    if (s == "relu") return Activation::ReLU;
    if (s == "tanh") return Activation::Tanh;
    if (s == "identity") return Activation::Identity;
    throw ContractError("unknown activation: " + s);
}

/// Side-input injection point: after the activation of hidden layer `layer`
/// (1-based), `width` extra values are appended before the next weight
/// matrix. layer = 0 means concatenation straight onto the input.
struct ConcatSpec {
    int layer = 1;
    int width = 0;
};

struct MlpSpec {
    std::vector<int> sizes;                 // including input and output
    std::vector<Activation> activations;    // one per non-input layer
    std::optional<ConcatSpec> concat;

    int depth() const { return static_cast<int>(sizes.size()) - 1; }
    int input_size() const { return sizes.front(); }
    int output_size() const { return sizes.back(); }

    /// Width actually fed into layer l (1-based), concat included.
    int fan_in(int l) const {
        int width = sizes[static_cast<std::size_t>(l) - 1];
        if (concat && concat->layer == l - 1) width += concat->width;
        return width;
    }

    void validate() const {
        if (sizes.size() < 2) throw ContractError("MlpSpec: need at least input and output layers");
        if (activations.size() != sizes.size() - 1) {
            throw ContractError("MlpSpec: one activation per non-input layer");
        }
        for (int s : sizes) {
            if (s <= 0) throw ContractError("MlpSpec: layer sizes must be positive");
        }
        if (concat) {
            if (concat->width <= 0) throw ContractError("MlpSpec: concat width must be positive");
            if (concat->layer < 0 || concat->layer >= depth()) {
                throw ContractError("MlpSpec: concat layer must name an existing layer");
            }
        }
    }
};

/// Dense real matrix, row-major.
struct RealMat {
    int rows = 0, cols = 0;
    std::vector<double> data;

    RealMat() = default;
    RealMat(int r, int c) : rows(r), cols(c), data(static_cast<std::size_t>(r) * c, 0.0) {}
    double& at(int r, int c) { return data[static_cast<std::size_t>(r) * cols + c]; }
    double at(int r, int c) const { return data[static_cast<std::size_t>(r) * cols + c]; }
};

struct MlpLayer {
    RealMat weights;             // out x in
    std::vector<double> bias;    // out
};

/// Weights and biases of one network. Doubles throughout; the
/// finite-difference tests need the headroom.
struct MlpParams {
    std::vector<MlpLayer> layers;

    /// this += scale * other, entrywise. Shapes must match.
    void add_scaled(const MlpParams& other, double s) {
        if (layers.size() != other.layers.size()) throw ShapeError("MlpParams: layer count mismatch");
        for (std::size_t l = 0; l < layers.size(); ++l) {
            MlpLayer& a = layers[l];
            const MlpLayer& b = other.layers[l];
            if (a.weights.data.size() != b.weights.data.size() || a.bias.size() != b.bias.size()) {
                throw ShapeError("MlpParams: layer shape mismatch");
            }
            for (std::size_t i = 0; i < a.weights.data.size(); ++i) {
                a.weights.data[i] += s * b.weights.data[i];
            }
            for (std::size_t i = 0; i < a.bias.size(); ++i) a.bias[i] += s * b.bias[i];
        }
    }

    void fill(double v) {
        for (MlpLayer& l : layers) {
            std::fill(l.weights.data.begin(), l.weights.data.end(), v);
            std::fill(l.bias.begin(), l.bias.end(), v);
        }
    }
};

inline MlpParams zero_params(const MlpSpec& spec) {
    spec.validate();
    MlpParams p;
    for (int l = 1; l <= spec.depth(); ++l) {
        p.layers.push_back({RealMat(spec.sizes[static_cast<std::size_t>(l)], spec.fan_in(l)),
                            std::vector<double>(static_cast<std::size_t>(spec.sizes[static_cast<std::size_t>(l)]), 0.0)});
    }
    return p;
}

/// Random weights, uniform in +-1/sqrt(fan_in) per layer.
inline MlpParams init_params(const MlpSpec& spec, RngStream& rng) {
    MlpParams p = zero_params(spec);
    for (MlpLayer& layer : p.layers) {
        const double bound = 1.0 / std::sqrt(static_cast<double>(layer.weights.cols));
        for (double& w : layer.weights.data) w = rng.uniform(-bound, bound);
        for (double& b : layer.bias) b = rng.uniform(-bound, bound);
    }
    return p;
}

inline double apply_activation(Activation a, double z) {
    switch (a) {
        case Activation::ReLU: return z > 0.0 ? z : 0.0;
        case Activation::Tanh: return std::tanh(z);
        case Activation::Identity: return z;
    }
    return z;
}

inline double activation_derivative(Activation a, double z, double out) {
    switch (a) {
        case Activation::ReLU: return z > 0.0 ? 1.0 : 0.0;
        case Activation::Tanh: return 1.0 - out * out;
        case Activation::Identity: return 1.0;
    }
    return 1.0;
}

/// Activation record from one forward pass. xs[l] is the (possibly
/// concatenated) vector fed into layer l+1; zs[l] and as[l] are that layer's
/// pre-activations and activations.
struct ForwardTape {
    std::vector<std::vector<double>> xs;
    std::vector<std::vector<double>> zs;
    std::vector<std::vector<double>> as;
};

struct ForwardResult {
    std::vector<double> output;
    ForwardTape tape;
};

inline ForwardResult mlp_forward(const MlpParams& p, const MlpSpec& spec,
                                 const std::vector<double>& input,
                                 const std::vector<double>* side_input = nullptr) {
    spec.validate();
    if (static_cast<int>(input.size()) != spec.input_size()) {
        throw ShapeError("mlp_forward: input width mismatch");
    }
    if (spec.concat.has_value() != (side_input != nullptr)) {
        throw ShapeError("mlp_forward: side input presence must match the spec");
    }
    if (side_input && static_cast<int>(side_input->size()) != spec.concat->width) {
        throw ShapeError("mlp_forward: side input width mismatch");
    }
    if (static_cast<int>(p.layers.size()) != spec.depth()) {
        throw ShapeError("mlp_forward: params do not match the spec");
    }

    ForwardTape tape;
    std::vector<double> x = input;
    if (spec.concat && spec.concat->layer == 0) {
        x.insert(x.end(), side_input->begin(), side_input->end());
    }
    for (int l = 1; l <= spec.depth(); ++l) {
        const MlpLayer& layer = p.layers[static_cast<std::size_t>(l - 1)];
        if (layer.weights.cols != static_cast<int>(x.size())) {
            throw ShapeError("mlp_forward: layer input width mismatch");
        }
        tape.xs.push_back(x);
        std::vector<double> z(layer.bias);
        for (int r = 0; r < layer.weights.rows; ++r) {
            double acc = 0.0;
            for (int c = 0; c < layer.weights.cols; ++c) acc += layer.weights.at(r, c) * x[static_cast<std::size_t>(c)];
            z[static_cast<std::size_t>(r)] += acc;
        }
        const Activation act = spec.activations[static_cast<std::size_t>(l - 1)];
        std::vector<double> a(z.size());
        for (std::size_t i = 0; i < z.size(); ++i) a[i] = apply_activation(act, z[i]);
        tape.zs.push_back(z);
        tape.as.push_back(a);
        x = a;
        if (spec.concat && spec.concat->layer == l) {
            x.insert(x.end(), side_input->begin(), side_input->end());
        }
    }
    return {tape.as.back(), std::move(tape)};
}

struct GradientResult {
    MlpParams params;               // same shapes as the network
    std::vector<double> input;      // d<upstream, out>/d input
    std::vector<double> side_input; // empty when the spec has no concat
};

/// Exact reverse-mode gradients of <upstream, output> with respect to all
/// parameters, the input, and the side input. The tape must come from a
/// forward pass of the same params/spec.
inline GradientResult mlp_gradients(const MlpParams& p, const MlpSpec& spec,
                                    const ForwardTape& tape,
                                    const std::vector<double>& upstream) {
    spec.validate();
    const int depth = spec.depth();
    if (static_cast<int>(tape.xs.size()) != depth || static_cast<int>(tape.zs.size()) != depth) {
        throw ContractError("mlp_gradients: tape does not match the spec (stale tape?)");
    }
    if (static_cast<int>(upstream.size()) != spec.output_size()) {
        throw ShapeError("mlp_gradients: upstream width mismatch");
    }
    for (int l = 1; l <= depth; ++l) {
        if (static_cast<int>(tape.xs[static_cast<std::size_t>(l - 1)].size()) != spec.fan_in(l)) {
            throw ContractError("mlp_gradients: tape widths disagree with the spec (stale tape?)");
        }
    }

    GradientResult g;
    g.params = zero_params(spec);
    if (spec.concat) g.side_input.assign(static_cast<std::size_t>(spec.concat->width), 0.0);

    std::vector<double> grad = upstream;  // d/d a_l, starting at the output
    for (int l = depth; l >= 1; --l) {
        const std::size_t li = static_cast<std::size_t>(l - 1);
        const MlpLayer& layer = p.layers[li];
        const Activation act = spec.activations[li];
        const std::vector<double>& z = tape.zs[li];
        const std::vector<double>& a = tape.as[li];
        const std::vector<double>& x = tape.xs[li];

        std::vector<double> dz(z.size());
        for (std::size_t i = 0; i < z.size(); ++i) {
            dz[i] = grad[i] * activation_derivative(act, z[i], a[i]);
        }

        MlpLayer& gl = g.params.layers[li];
        for (int r = 0; r < layer.weights.rows; ++r) {
            const double d = dz[static_cast<std::size_t>(r)];
            gl.bias[static_cast<std::size_t>(r)] += d;
            for (int c = 0; c < layer.weights.cols; ++c) {
                gl.weights.at(r, c) += d * x[static_cast<std::size_t>(c)];
            }
        }

        std::vector<double> dx(x.size(), 0.0);
        for (int r = 0; r < layer.weights.rows; ++r) {
            const double d = dz[static_cast<std::size_t>(r)];
            for (int c = 0; c < layer.weights.cols; ++c) {
                dx[static_cast<std::size_t>(c)] += layer.weights.at(r, c) * d;
            }
        }

        if (spec.concat && spec.concat->layer == l - 1) {
            const std::size_t main_width = dx.size() - g.side_input.size();
            for (std::size_t i = 0; i < g.side_input.size(); ++i) {
                g.side_input[i] += dx[main_width + i];
            }
            dx.resize(main_width);
        }
        grad = std::move(dx);
    }
    g.input = std::move(grad);
    return g;
}

/// Adam accumulators shaped like the parameters they update.
struct AdamState {
    MlpParams m, v;
    long long step = 0;
    double lr = 1e-3;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double eps = 1e-8;
};

inline AdamState make_adam(const MlpSpec& spec, double lr) {
    AdamState st;
    st.m = zero_params(spec);
    st.v = zero_params(spec);
    st.lr = lr;
    return st;
}

/// One bias-corrected Adam step; `grads` is read as the gradient of a loss
/// to be minimized.
inline void adam_step(MlpParams& p, const MlpParams& grads, AdamState& st) {
    if (p.layers.size() != grads.layers.size()) throw ShapeError("adam_step: shape mismatch");
    st.step += 1;
    const double bc1 = 1.0 - std::pow(st.beta1, static_cast<double>(st.step));
    const double bc2 = 1.0 - std::pow(st.beta2, static_cast<double>(st.step));
    for (std::size_t l = 0; l < p.layers.size(); ++l) {
        auto update = [&](std::vector<double>& param, const std::vector<double>& grad,
                          std::vector<double>& m, std::vector<double>& v) {
            if (param.size() != grad.size()) throw ShapeError("adam_step: shape mismatch");
            for (std::size_t i = 0; i < param.size(); ++i) {
                m[i] = st.beta1 * m[i] + (1.0 - st.beta1) * grad[i];
                v[i] = st.beta2 * v[i] + (1.0 - st.beta2) * grad[i] * grad[i];
                const double mhat = m[i] / bc1;
                const double vhat = v[i] / bc2;
                param[i] -= st.lr * mhat / (std::sqrt(vhat) + st.eps);
            }
        };
        update(p.layers[l].weights.data, grads.layers[l].weights.data,
               st.m.layers[l].weights.data, st.v.layers[l].weights.data);
        update(p.layers[l].bias, grads.layers[l].bias, st.m.layers[l].bias, st.v.layers[l].bias);
    }
}

/// theta' <- tau theta + (1 - tau) theta', elementwise.
inline void soft_update(MlpParams& target, const MlpParams& source, double tau) {
    if (!(tau > 0.0 && tau <= 1.0)) throw DomainError("soft_update: tau must be in (0, 1]");
    if (target.layers.size() != source.layers.size()) throw ShapeError("soft_update: shape mismatch");
    for (std::size_t l = 0; l < target.layers.size(); ++l) {
        auto blend = [&](std::vector<double>& t, const std::vector<double>& s) {
            if (t.size() != s.size()) throw ShapeError("soft_update: shape mismatch");
            for (std::size_t i = 0; i < t.size(); ++i) t[i] = tau * s[i] + (1.0 - tau) * t[i];
        };
        blend(target.layers[l].weights.data, source.layers[l].weights.data);
        blend(target.layers[l].bias, source.layers[l].bias);
    }
}

namespace detail {
inline void print_value(std::ostream& os, double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    os << buf;
}
}  // namespace detail

/// Text checkpoint: a header with layer sizes, activations, and the concat
/// rule, followed by row-major weights and biases at full precision. Values
/// round-trip exactly.
inline void save_checkpoint(std::ostream& os, const MlpSpec& spec, const MlpParams& p) {
    spec.validate();
    os << "mlp 1\nsizes";
    for (int s : spec.sizes) os << ' ' << s;
    os << "\nactivations";
    for (Activation a : spec.activations) os << ' ' << activation_name(a);
    os << '\n';
    if (spec.concat) {
        os << "concat " << spec.concat->layer << ' ' << spec.concat->width << '\n';
    } else {
        os << "concat none\n";
    }
    for (std::size_t l = 0; l < p.layers.size(); ++l) {
        const MlpLayer& layer = p.layers[l];
        os << "layer " << l << ' ' << layer.weights.rows << ' ' << layer.weights.cols << '\n';
        for (int r = 0; r < layer.weights.rows; ++r) {
            for (int c = 0; c < layer.weights.cols; ++c) {
                if (c) os << ' ';
                detail::print_value(os, layer.weights.at(r, c));
            }
            os << '\n';
        }
        for (std::size_t i = 0; i < layer.bias.size(); ++i) {
            if (i) os << ' ';
            detail::print_value(os, layer.bias[i]);
        }
        os << '\n';
    }
}

inline void save_checkpoint(const std::string& path, const MlpSpec& spec, const MlpParams& p) {
    std::ofstream os(path);
    if (!os) throw IoError(path, "cannot open checkpoint for writing");
    save_checkpoint(os, spec, p);
    if (!os.good()) throw IoError(path, "write failure in checkpoint");
}

struct Checkpoint {
    MlpSpec spec;
    MlpParams params;
};

inline Checkpoint load_checkpoint(std::istream& is) {
    std::string magic;
    int version = 0;
    if (!(is >> magic >> version) || magic != "mlp" || version != 1) {
        throw ContractError("checkpoint: bad header");
    }
    std::string line, tag;
    is >> tag;
    if (tag != "sizes") throw ContractError("checkpoint: missing sizes");
    std::getline(is, line);
    Checkpoint cp;
    {
        std::istringstream ss(line);
        int v;
        while (ss >> v) cp.spec.sizes.push_back(v);
    }
    is >> tag;
    if (tag != "activations") throw ContractError("checkpoint: missing activations");
    std::getline(is, line);
    {
        std::istringstream ss(line);
        std::string name;
        while (ss >> name) cp.spec.activations.push_back(activation_from_name(name));
    }
    is >> tag;
    if (tag != "concat") throw ContractError("checkpoint: missing concat rule");
    std::string first;
    is >> first;
    if (first != "none") {
        ConcatSpec c;
        c.layer = std::atoi(first.c_str());
        if (!(is >> c.width)) throw ContractError("checkpoint: truncated concat rule");
        cp.spec.concat = c;
    }
    cp.spec.validate();
    cp.params = zero_params(cp.spec);
    for (std::size_t l = 0; l < cp.params.layers.size(); ++l) {
        std::size_t index = 0;
        int rows = 0, cols = 0;
        if (!(is >> tag >> index >> rows >> cols) || tag != "layer" || index != l) {
            throw ContractError("checkpoint: bad layer header");
        }
        MlpLayer& layer = cp.params.layers[l];
        if (rows != layer.weights.rows || cols != layer.weights.cols) {
            throw ContractError("checkpoint: layer shape disagrees with the spec header");
        }
        for (double& w : layer.weights.data) {
            if (!(is >> w)) throw ContractError("checkpoint: truncated weights");
        }
        for (double& b : layer.bias) {
            if (!(is >> b)) throw ContractError("checkpoint: truncated biases");
        }
    }
    return cp;
}

inline Checkpoint load_checkpoint(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw IoError(path, "cannot open checkpoint for reading");
    return load_checkpoint(is);
}

}  // namespace risfd
