#pragma once

#include <array>
#include <memory>
#include <string>

#include "srise/embedding.hpp"

namespace srise {

/// How an image is laid out and normalized before entering an external model.
struct TensorLayout {
    enum class Order { CHW, HWC };
    Order order = Order::CHW;
    std::array<double, 3> mean = {0.0, 0.0, 0.0}; // per channel, applied after [0,1] scaling
    std::array<double, 3> stddev = {1.0, 1.0, 1.0};
};

/// Wraps a user-supplied network stored as an ONNX file.
///
/// The built-in executor covers the MLP-style operator subset
/// {Gemm, MatMul, Add, Relu, Tanh, Sigmoid, Flatten, Identity} with float32
/// initializers, which is enough for feature extractors exported as
/// flatten + dense stacks. Anything else raises InferenceError at load time.
class ExternalModelEmbedder : public Embedder {
public:
    ExternalModelEmbedder(const std::string& model_path, const TensorLayout& layout,
                          int height, int width, int channels);
    ~ExternalModelEmbedder() override;

    ExternalModelEmbedder(ExternalModelEmbedder&&) noexcept;
    ExternalModelEmbedder& operator=(ExternalModelEmbedder&&) noexcept;

    std::string name() const override;
    int input_height() const override { return height_; }
    int input_width() const override { return width_; }
    int input_channels() const override { return channels_; }
    int output_dim() const;
    Embedding embed(const Image& img) const override;

private:
    struct Model;
    std::unique_ptr<Model> model_;
    TensorLayout layout_;
    int height_, width_, channels_;
    std::string path_;
};

} // namespace srise
