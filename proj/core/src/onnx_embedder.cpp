#include "srise/onnx_embedder.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <map>
#include <utility>

#include "onnx_subset.pb.h"

namespace srise {

namespace {

struct Tensor {
    std::vector<std::int64_t> dims;
    std::vector<double> data;

    std::size_t numel() const { return data.size(); }

    /// Rows/cols of a tensor viewed as a matrix; vectors are 1 x N rows.
    std::pair<std::int64_t, std::int64_t> as_matrix() const {
        std::vector<std::int64_t> d;
        for (const auto x : dims) {
            if (x != 1 || dims.size() <= 1) d.push_back(x);
        }
        if (d.size() == 1) return {1, d[0]};
        if (d.size() == 2) return {d[0], d[1]};
        throw InferenceError("tensor rank " + std::to_string(dims.size()) +
                             " not supported by the MLP executor");
    }
};

Tensor tensor_from_proto(const onnxsub::TensorProto& tp) {
    if (tp.data_type() != 1) {
        throw InferenceError("initializer '" + tp.name() + "' is not float32");
    }
    Tensor t;
    t.dims.assign(tp.dims().begin(), tp.dims().end());
    std::size_t n = 1;
    for (const auto d : t.dims) n *= static_cast<std::size_t>(d);
    t.data.resize(n);
    if (!tp.raw_data().empty()) {
        if (tp.raw_data().size() != n * 4) {
            throw InferenceError("initializer '" + tp.name() + "' has inconsistent raw size");
        }
        for (std::size_t i = 0; i < n; ++i) {
            std::uint32_t bits = 0;
            const auto* b = reinterpret_cast<const unsigned char*>(tp.raw_data().data()) + i * 4;
            bits = static_cast<std::uint32_t>(b[0]) | (static_cast<std::uint32_t>(b[1]) << 8) |
                   (static_cast<std::uint32_t>(b[2]) << 16) |
                   (static_cast<std::uint32_t>(b[3]) << 24);
            float f;
            std::memcpy(&f, &bits, 4);
            t.data[i] = f;
        }
    } else {
        if (static_cast<std::size_t>(tp.float_data_size()) != n) {
            throw InferenceError("initializer '" + tp.name() + "' has inconsistent float_data size");
        }
        for (std::size_t i = 0; i < n; ++i) t.data[i] = tp.float_data(static_cast<int>(i));
    }
    return t;
}

double attr_f(const onnxsub::NodeProto& node, const std::string& name, double fallback) {
    for (const auto& a : node.attribute()) {
        if (a.name() == name) return a.f();
    }
    return fallback;
}

std::int64_t attr_i(const onnxsub::NodeProto& node, const std::string& name, std::int64_t fallback) {
    for (const auto& a : node.attribute()) {
        if (a.name() == name) return a.i();
    }
    return fallback;
}

Tensor matmul(const Tensor& a, const Tensor& b, bool trans_a, bool trans_b, double alpha) {
    auto [ar, ac] = a.as_matrix();
    auto [br, bc] = b.as_matrix();
    if (trans_a) std::swap(ar, ac);
    if (trans_b) std::swap(br, bc);
    if (ac != br) {
        throw InferenceError("matrix shapes do not compose: " + std::to_string(ar) + "x" +
                             std::to_string(ac) + " * " + std::to_string(br) + "x" +
                             std::to_string(bc));
    }
    Tensor out;
    out.dims = {ar, bc};
    out.data.assign(static_cast<std::size_t>(ar * bc), 0.0);
    const auto at = [&](std::int64_t r, std::int64_t c) {
        return trans_a ? a.data[static_cast<std::size_t>(c * ar + r)]
                       : a.data[static_cast<std::size_t>(r * ac + c)];
    };
    const auto bt = [&](std::int64_t r, std::int64_t c) {
        return trans_b ? b.data[static_cast<std::size_t>(c * br + r)]
                       : b.data[static_cast<std::size_t>(r * bc + c)];
    };
    for (std::int64_t r = 0; r < ar; ++r) {
        for (std::int64_t k = 0; k < ac; ++k) {
            const double av = alpha * at(r, k);
            for (std::int64_t c = 0; c < bc; ++c) {
                out.data[static_cast<std::size_t>(r * bc + c)] += av * bt(k, c);
            }
        }
    }
    return out;
}

Tensor add_broadcast(const Tensor& a, const Tensor& b, double beta) {
    // Elementwise with trailing-dimension broadcast, enough for bias adds.
    const Tensor& big = a.numel() >= b.numel() ? a : b;
    const Tensor& small = a.numel() >= b.numel() ? b : a;
    if (big.numel() % small.numel() != 0) {
        throw InferenceError("Add operands do not broadcast");
    }
    Tensor out = big;
    const std::size_t m = small.numel();
    for (std::size_t i = 0; i < out.data.size(); ++i) {
        out.data[i] = big.data[i] + beta * small.data[i % m];
    }
    return out;
}

} // namespace

struct ExternalModelEmbedder::Model {
    onnxsub::ModelProto proto;
    std::map<std::string, Tensor> initializers;
    std::string input_name;
    std::string output_name;

    Tensor run(Tensor input) const {
        std::map<std::string, Tensor> values;
        values.emplace(input_name, std::move(input));

        const auto fetch = [&](const std::string& name) -> const Tensor& {
            if (const auto it = values.find(name); it != values.end()) return it->second;
            if (const auto it = initializers.find(name); it != initializers.end()) return it->second;
            throw InferenceError("node input '" + name + "' is not available");
        };

        for (const auto& node : proto.graph().node()) {
            const std::string& op = node.op_type();
            Tensor out;
            if (op == "Gemm") {
                const bool ta = attr_i(node, "transA", 0) != 0;
                const bool tb = attr_i(node, "transB", 0) != 0;
                const double alpha = attr_f(node, "alpha", 1.0);
                const double beta = attr_f(node, "beta", 1.0);
                out = matmul(fetch(node.input(0)), fetch(node.input(1)), ta, tb, alpha);
                if (node.input_size() > 2) {
                    out = add_broadcast(out, fetch(node.input(2)), beta);
                }
            } else if (op == "MatMul") {
                out = matmul(fetch(node.input(0)), fetch(node.input(1)), false, false, 1.0);
            } else if (op == "Add") {
                out = add_broadcast(fetch(node.input(0)), fetch(node.input(1)), 1.0);
            } else if (op == "Relu") {
                out = fetch(node.input(0));
                for (double& v : out.data) v = std::max(v, 0.0);
            } else if (op == "Tanh") {
                out = fetch(node.input(0));
                for (double& v : out.data) v = std::tanh(v);
            } else if (op == "Sigmoid") {
                out = fetch(node.input(0));
                for (double& v : out.data) v = 1.0 / (1.0 + std::exp(-v));
            } else if (op == "Flatten") {
                out = fetch(node.input(0));
                out.dims = {1, static_cast<std::int64_t>(out.numel())};
            } else if (op == "Identity") {
                out = fetch(node.input(0));
            } else {
                throw InferenceError("unsupported ONNX op '" + op +
                                     "' (executor covers Gemm, MatMul, Add, Relu, Tanh, "
                                     "Sigmoid, Flatten, Identity)");
            }
            if (node.output_size() != 1) {
                throw InferenceError("node '" + node.name() + "' must have exactly one output");
            }
            values[node.output(0)] = std::move(out);
        }
        const auto it = values.find(output_name);
        if (it == values.end()) {
            throw InferenceError("graph output '" + output_name + "' was never produced");
        }
        return it->second;
    }
};

ExternalModelEmbedder::ExternalModelEmbedder(const std::string& model_path,
                                             const TensorLayout& layout, int height, int width,
                                             int channels)
    : model_(std::make_unique<Model>()), layout_(layout), height_(height), width_(width),
      channels_(channels), path_(model_path) {
    std::ifstream f(model_path, std::ios::binary);
    if (!f) throw InputError("cannot open model file: " + model_path);
    const std::string bytes((std::istreambuf_iterator<char>(f)), std::istreambuf_iterator<char>());
    if (!model_->proto.ParseFromString(bytes)) {
        throw InferenceError("not a parseable ONNX file: " + model_path);
    }
    const auto& graph = model_->proto.graph();
    if (graph.output_size() != 1) {
        throw InferenceError("model must have exactly one output: " + model_path);
    }
    model_->output_name = graph.output(0).name();
    for (const auto& init : graph.initializer()) {
        model_->initializers[init.name()] = tensor_from_proto(init);
    }
    for (const auto& in : graph.input()) {
        if (!model_->initializers.count(in.name())) {
            if (!model_->input_name.empty()) {
                throw InferenceError("model must have exactly one data input: " + model_path);
            }
            model_->input_name = in.name();
        }
    }
    if (model_->input_name.empty()) {
        throw InferenceError("model has no data input: " + model_path);
    }

    // Validates the graph eagerly and pins the output dimension.
    Tensor probe;
    probe.dims = {1, static_cast<std::int64_t>(height) * width * channels};
    probe.data.assign(static_cast<std::size_t>(height) * width * channels, 0.0);
    const Tensor out = model_->run(std::move(probe));
    if (out.numel() == 0) throw InferenceError("model produced an empty output: " + model_path);
}

ExternalModelEmbedder::~ExternalModelEmbedder() = default;
ExternalModelEmbedder::ExternalModelEmbedder(ExternalModelEmbedder&&) noexcept = default;
ExternalModelEmbedder& ExternalModelEmbedder::operator=(ExternalModelEmbedder&&) noexcept = default;

std::string ExternalModelEmbedder::name() const { return "external:" + path_; }

int ExternalModelEmbedder::output_dim() const {
    Tensor probe;
    probe.dims = {1, static_cast<std::int64_t>(height_) * width_ * channels_};
    probe.data.assign(static_cast<std::size_t>(height_) * width_ * channels_, 0.0);
    return static_cast<int>(model_->run(std::move(probe)).numel());
}

Embedding ExternalModelEmbedder::embed(const Image& img) const {
    check_input(img);
    Tensor input;
    input.dims = {1, static_cast<std::int64_t>(img.data.size())};
    input.data.resize(img.data.size());

    const auto normalized = [&](int y, int x, int c) {
        return (img.at(y, x, c) - layout_.mean[static_cast<std::size_t>(c)]) /
               layout_.stddev[static_cast<std::size_t>(c)];
    };
    std::size_t i = 0;
    if (layout_.order == TensorLayout::Order::CHW) {
        for (int c = 0; c < img.channels; ++c) {
            for (int y = 0; y < img.height; ++y) {
                for (int x = 0; x < img.width; ++x) input.data[i++] = normalized(y, x, c);
            }
        }
    } else {
        for (int y = 0; y < img.height; ++y) {
            for (int x = 0; x < img.width; ++x) {
                for (int c = 0; c < img.channels; ++c) input.data[i++] = normalized(y, x, c);
            }
        }
    }

    Tensor out = model_->run(std::move(input));
    Embedding e;
    e.values = std::move(out.data);
    return e;
}

} // namespace srise
