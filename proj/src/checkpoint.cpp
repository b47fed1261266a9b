#include "trice/checkpoint.hpp"

#include <fstream>

#include <json.hpp>

#include "trice/errors.hpp"

namespace trice {

using nlohmann::json;

Network checkpoint_network(const Checkpoint& cp) {
    if (cp.model == "lenet") return make_lenet(cp.num_classes);
    if (cp.model == "mlp") return make_mlp(16, 32, cp.num_classes);
    throw ParseError("checkpoint names unknown model '" + cp.model + "'");
}

void save_checkpoint(const std::string& path, const Checkpoint& cp) {
    json doc;
    doc["format_version"] = cp.format_version;
    doc["model"] = cp.model;
    doc["num_classes"] = cp.num_classes;
    json tensors = json::array();
    for (std::size_t i = 0; i < cp.weights.layers.size(); ++i) {
        const auto& lw = cp.weights.layers[i];
        json t;
        t["shape"] = lw.weight.shape;
        t["max_abs"] = lw.max_abs;
        t["weight"] = lw.weight.data;
        t["bias"] = lw.bias.data;
        tensors.push_back(std::move(t));
    }
    doc["tensors"] = std::move(tensors);
    doc["provenance"] = {{"method", cp.method},
                         {"seed", cp.seed},
                         {"sigma_t", cp.sigma_t},
                         {"sigma_d", cp.sigma_d}};
    std::ofstream out(path);
    if (!out) throw ParseError("cannot write checkpoint '" + path + "'");
    out << doc.dump(1, '\t') << "\n";
}

Checkpoint load_checkpoint(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open checkpoint '" + path + "'");
    json doc;
    try {
        in >> doc;
    } catch (const json::exception& e) {
        throw ParseError("checkpoint '" + path + "' is not valid JSON: " + e.what());
    }
    Checkpoint cp;
    try {
        cp.format_version = doc.at("format_version").get<int>();
        if (cp.format_version != 1) {
            throw ParseError("unsupported checkpoint format version " +
                             std::to_string(cp.format_version));
        }
        cp.model = doc.at("model").get<std::string>();
        cp.num_classes = doc.at("num_classes").get<int>();
        for (const auto& t : doc.at("tensors")) {
            LayerWeights lw;
            lw.weight = Tensor(t.at("shape").get<std::vector<int>>(),
                               t.at("weight").get<std::vector<double>>());
            auto bias = t.at("bias").get<std::vector<double>>();
            lw.bias = Tensor({static_cast<int>(bias.size())}, std::move(bias));
            lw.max_abs = t.at("max_abs").get<double>();
            cp.weights.layers.push_back(std::move(lw));
        }
        const auto& prov = doc.at("provenance");
        cp.method = prov.at("method").get<std::string>();
        cp.seed = prov.at("seed").get<std::uint64_t>();
        cp.sigma_t = prov.at("sigma_t").get<double>();
        cp.sigma_d = prov.at("sigma_d").get<double>();
    } catch (const json::exception& e) {
        throw ParseError("checkpoint '" + path + "' is malformed: " + e.what());
    }
    // Shape self-consistency against the declared topology.
    const Network net = checkpoint_network(cp);
    std::size_t wi = 0;
    for (const auto& spec : net) {
        if (!spec.has_weights()) continue;
        if (wi >= cp.weights.layers.size()) {
            throw ParseError("checkpoint '" + path + "' has too few weight tensors");
        }
        const auto& lw = cp.weights.layers[wi];
        const std::vector<int> expect_w =
            spec.kind == LayerKind::Linear
                ? std::vector<int>{spec.out_features, spec.in_features}
                : std::vector<int>{spec.out_channels, spec.in_channels, spec.kernel, spec.kernel};
        if (lw.weight.shape != expect_w) {
            throw ParseError("checkpoint '" + path + "' weight tensor " + std::to_string(wi) +
                             " has shape " + lw.weight.shape_str() + ", expected " +
                             shape_to_string(expect_w));
        }
        ++wi;
    }
    if (wi != cp.weights.layers.size()) {
        throw ParseError("checkpoint '" + path + "' has extra weight tensors");
    }
    return cp;
}

}  // namespace trice
