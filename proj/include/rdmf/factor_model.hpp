#ifndef RDMF_FACTOR_MODEL_HPP
#define RDMF_FACTOR_MODEL_HPP

#include <string>
#include <vector>

#include "rdmf/dense_matrix.hpp"

namespace rdmf {

enum class Activation { Linear, ReLU, Sigmoid, Tanh };

const char* activation_name(Activation a);
Activation activation_from_name(const std::string& name);

// Layer gradients, shaped exactly like the model's weights/biases.
struct GradientSet {
    std::vector<DenseMatrix> d_weights;
    std::vector<DenseMatrix> d_biases;  // empty when the model has no biases
};

// L-layer factorization network evaluated on the identity input:
//   h0 = I_d,  h_{l+1} = act(W[l] h_l + b[l]),  output = h_L  (d_o x d).
// The activation is applied at every layer including the outermost.
// Bias matrices are full m_{l+1} x m0 (one offset per output entry).
//
// forward() caches the layer activations; backward() consumes that cache,
// so a model instance is single-owner mutable state.
class FactorModel {
public:
    FactorModel() = default;
    // Zero-initialized weights/biases of the given architecture.
    FactorModel(std::vector<int> dims, Activation activation, bool use_bias);

    int depth() const { return static_cast<int>(weights.size()); }
    int input_dim() const { return dims.front(); }
    int output_dim() const { return dims.back(); }

    void validate() const;  // throws ShapeError on inconsistent shapes

    // f_theta(I_d). Caches per-layer activations for backward().
    const DenseMatrix& forward();

    // Gradients of a scalar loss w.r.t. every weight and bias, given
    // upstream = dLoss/d(output). Requires a prior forward() on the
    // current parameters; throws StateError otherwise.
    GradientSet backward(const DenseMatrix& upstream) const;

    // W^{[L-1]} ... W^{[0]}. Linear bias-free models only.
    DenseMatrix product_matrix() const;

    // forward() reuses its cache until this is called; call it after any
    // direct parameter mutation. gd_step/AdamState do so themselves.
    void invalidate_cache() { forward_done_ = false; }

    std::vector<int> dims;                // m0 .. mL
    std::vector<DenseMatrix> weights;     // weights[l] is m_{l+1} x m_l
    std::vector<DenseMatrix> biases;      // empty, or biases[l] is m_{l+1} x m0
    Activation activation = Activation::Linear;
    bool use_bias = false;

private:
    std::vector<DenseMatrix> acts_;       // acts_[0] = I_d, acts_[L] = output
    bool forward_done_ = false;
};

// Binary model container: 8-byte magic "RDMFCKPT", version byte, then
// architecture and row-major doubles. Round-trips bit-exactly.
void save_checkpoint(const FactorModel& model, const std::string& path);
FactorModel load_checkpoint(const std::string& path);

}  // namespace rdmf

#endif
