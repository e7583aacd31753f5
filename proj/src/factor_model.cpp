#include "rdmf/factor_model.hpp"

#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <utility>

#include "rdmf/error.hpp"

namespace rdmf {

const char* activation_name(Activation a) {
    switch (a) {
        case Activation::Linear: return "linear";
        case Activation::ReLU: return "relu";
        case Activation::Sigmoid: return "sigmoid";
        case Activation::Tanh: return "tanh";
    }
    return "?";
}

Activation activation_from_name(const std::string& name) {
    if (name == "linear") return Activation::Linear;
    if (name == "relu") return Activation::ReLU;
    if (name == "sigmoid") return Activation::Sigmoid;
    if (name == "tanh") return Activation::Tanh;
    throw ConfigError("unknown activation '" + name + "'");
}

namespace {

double apply_act(Activation a, double z) {
    switch (a) {
        case Activation::Linear: return z;
        case Activation::ReLU: return z > 0.0 ? z : 0.0;
        case Activation::Sigmoid: return 1.0 / (1.0 + std::exp(-z));
        case Activation::Tanh: return std::tanh(z);
    }
    return z;
}

// Derivative expressed through the activation output h = act(z).
// ReLU derivative at z == 0 is 0.
double act_deriv_from_output(Activation a, double h) {
    switch (a) {
        case Activation::Linear: return 1.0;
        case Activation::ReLU: return h > 0.0 ? 1.0 : 0.0;
        case Activation::Sigmoid: return h * (1.0 - h);
        case Activation::Tanh: return 1.0 - h * h;
    }
    return 1.0;
}

}  // namespace

FactorModel::FactorModel(std::vector<int> d, Activation act, bool bias) {
    dims = std::move(d);
    activation = act;
    use_bias = bias;
    if (dims.size() < 3) {
        throw ShapeError("factor model needs depth >= 2, got " +
                         std::to_string(dims.size() < 1 ? 0 : dims.size() - 1) + " layers");
    }
    const int L = static_cast<int>(dims.size()) - 1;
    weights.reserve(L);
    for (int l = 0; l < L; ++l) weights.emplace_back(dims[l + 1], dims[l]);
    if (use_bias) {
        biases.reserve(L);
        for (int l = 0; l < L; ++l) biases.emplace_back(dims[l + 1], dims[0]);
    }
    validate();
}

void FactorModel::validate() const {
    if (dims.size() < 3) throw ShapeError("factor model needs depth >= 2");
    const int L = static_cast<int>(dims.size()) - 1;
    for (int d : dims)
        if (d <= 0) throw ShapeError("factor model dims must be positive");
    if (static_cast<int>(weights.size()) != L) {
        throw ShapeError("expected " + std::to_string(L) + " weight matrices, got " +
                         std::to_string(weights.size()));
    }
    for (int l = 0; l < L; ++l) {
        if (weights[l].rows() != dims[l + 1] || weights[l].cols() != dims[l]) {
            throw ShapeError("weights[" + std::to_string(l) + "] is " +
                             shape_string(weights[l]) + ", expected " +
                             std::to_string(dims[l + 1]) + "x" + std::to_string(dims[l]));
        }
    }
    if (use_bias) {
        if (static_cast<int>(biases.size()) != L) {
            throw ShapeError("expected " + std::to_string(L) + " bias matrices, got " +
                             std::to_string(biases.size()));
        }
        for (int l = 0; l < L; ++l) {
            if (biases[l].rows() != dims[l + 1] || biases[l].cols() != dims[0]) {
                throw ShapeError("biases[" + std::to_string(l) + "] is " +
                                 shape_string(biases[l]));
            }
        }
    } else if (!biases.empty()) {
        throw ShapeError("use_bias is false but biases are present");
    }
}

const DenseMatrix& FactorModel::forward() {
    if (forward_done_) return acts_.back();
    validate();
    const int L = depth();
    acts_.assign(1, DenseMatrix::identity(dims[0]));
    acts_.reserve(L + 1);
    for (int l = 0; l < L; ++l) {
        DenseMatrix z = matmul(weights[l], acts_[l]);
        if (use_bias) z.axpy(1.0, biases[l]);
        for (long k = 0; k < z.size(); ++k) z.data()[k] = apply_act(activation, z.data()[k]);
        acts_.push_back(std::move(z));
    }
    forward_done_ = true;
    return acts_.back();
}

GradientSet FactorModel::backward(const DenseMatrix& upstream) const {
    if (!forward_done_) throw StateError("backward called before forward");
    const int L = depth();
    if (upstream.rows() != output_dim() || upstream.cols() != input_dim()) {
        throw ShapeError("upstream is " + shape_string(upstream) + ", expected " +
                         std::to_string(output_dim()) + "x" + std::to_string(input_dim()));
    }

    GradientSet g;
    g.d_weights.resize(L);
    if (use_bias) g.d_biases.resize(L);

    DenseMatrix grad = upstream;  // dLoss/d(h_{l+1}), shrinks layer by layer
    for (int l = L - 1; l >= 0; --l) {
        // delta = grad (.) act'(h_{l+1})
        DenseMatrix delta = grad;
        const DenseMatrix& out = acts_[l + 1];
        for (long k = 0; k < delta.size(); ++k) {
            delta.data()[k] *= act_deriv_from_output(activation, out.data()[k]);
        }
        g.d_weights[l] = matmul_a_bt(delta, acts_[l]);
        if (use_bias) g.d_biases[l] = delta;
        if (l > 0) grad = matmul_at_b(weights[l], delta);
    }
    return g;
}

DenseMatrix FactorModel::product_matrix() const {
    validate();
    if (activation != Activation::Linear || use_bias) {
        throw StateError("product_matrix requires a linear bias-free model");
    }
    DenseMatrix w = weights[0];
    for (int l = 1; l < depth(); ++l) w = matmul(weights[l], w);
    return w;
}

// --- checkpoint container ------------------------------------------------

namespace {

constexpr char kMagic[8] = {'R', 'D', 'M', 'F', 'C', 'K', 'P', 'T'};
constexpr std::uint8_t kVersion = 1;

void write_u32(std::ofstream& os, std::uint32_t v) {
    unsigned char b[4] = {static_cast<unsigned char>(v), static_cast<unsigned char>(v >> 8),
                          static_cast<unsigned char>(v >> 16),
                          static_cast<unsigned char>(v >> 24)};
    os.write(reinterpret_cast<const char*>(b), 4);
}

std::uint32_t read_u32(std::ifstream& is) {
    unsigned char b[4];
    is.read(reinterpret_cast<char*>(b), 4);
    return static_cast<std::uint32_t>(b[0]) | (static_cast<std::uint32_t>(b[1]) << 8) |
           (static_cast<std::uint32_t>(b[2]) << 16) | (static_cast<std::uint32_t>(b[3]) << 24);
}

void write_matrix(std::ofstream& os, const DenseMatrix& m) {
    os.write(reinterpret_cast<const char*>(m.data()),
             static_cast<std::streamsize>(m.size() * sizeof(double)));
}

void read_matrix(std::ifstream& is, DenseMatrix& m) {
    is.read(reinterpret_cast<char*>(m.data()),
            static_cast<std::streamsize>(m.size() * sizeof(double)));
}

}  // namespace

void save_checkpoint(const FactorModel& model, const std::string& path) {
    model.validate();
    std::ofstream os(path, std::ios::binary);
    if (!os) throw DataError("cannot open checkpoint for writing: " + path);
    os.write(kMagic, 8);
    os.put(static_cast<char>(kVersion));
    os.put(static_cast<char>(model.activation));
    os.put(model.use_bias ? 1 : 0);
    write_u32(os, static_cast<std::uint32_t>(model.depth()));
    for (int d : model.dims) write_u32(os, static_cast<std::uint32_t>(d));
    for (const auto& w : model.weights) write_matrix(os, w);
    for (const auto& b : model.biases) write_matrix(os, b);
    if (!os) throw DataError("checkpoint write failed: " + path);
}

FactorModel load_checkpoint(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw DataError("cannot open checkpoint: " + path);
    char magic[8];
    is.read(magic, 8);
    if (!is || std::memcmp(magic, kMagic, 8) != 0) {
        throw ParseError("bad checkpoint magic in " + path);
    }
    const int version = is.get();
    if (version != kVersion) {
        throw ParseError("unsupported checkpoint version " + std::to_string(version));
    }
    const int act = is.get();
    if (act < 0 || act > 3) throw ParseError("bad activation code in checkpoint");
    const int bias_flag = is.get();
    const std::uint32_t L = read_u32(is);
    if (!is || L < 2 || L > 1024) throw ParseError("bad layer count in checkpoint");
    std::vector<int> dims(L + 1);
    for (auto& d : dims) {
        d = static_cast<int>(read_u32(is));
        if (d <= 0) throw ParseError("bad dimension in checkpoint");
    }
    FactorModel model(dims, static_cast<Activation>(act), bias_flag != 0);
    for (auto& w : model.weights) read_matrix(is, w);
    for (auto& b : model.biases) read_matrix(is, b);
    if (!is) throw ParseError("truncated checkpoint: " + path);
    model.validate();
    return model;
}

}  // namespace rdmf
