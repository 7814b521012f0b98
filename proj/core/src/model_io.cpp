#include "mibci/model_io.hpp"

#include <fstream>
#include <sstream>
#include <vector>

#include <nlohmann/json.hpp>

#include "mibci/error.hpp"

namespace mibci {
using nlohmann::json;

namespace {

json lda_json(const LdaModel& m) {
    return {{"w", std::vector<double>(m.w.data(), m.w.data() + m.w.size())}, {"b", m.b}};
}

LdaModel lda_from(const json& j) {
    const auto w = j.at("w").get<std::vector<double>>();
    LdaModel m;
    m.w = Eigen::Map<const Eigen::VectorXd>(w.data(), static_cast<Eigen::Index>(w.size()));
    m.b = j.at("b").get<double>();
    return m;
}

json parse_json(const std::string& text) {
    try {
        return json::parse(text);
    } catch (const json::exception& e) {
        throw IoError(std::string("malformed model file: ") + e.what());
    }
}

}  // namespace

std::string serialize(const LdaModel& model) {
    json j = lda_json(model);
    j["type"] = "lda";
    return j.dump(2);
}

std::string serialize(const BaggingEnsemble& e) {
    json comps = json::array();
    for (const auto& c : e.components) comps.push_back(lda_json(c));
    const json j = {{"type", "bagging"},
                    {"rounds", e.rounds},
                    {"subset_fraction", e.subset_fraction},
                    {"seed", e.seed},
                    {"components", comps}};
    return j.dump(2);
}

LdaModel parse_lda(const std::string& text) {
    const json j = parse_json(text);
    try {
        if (j.at("type") != "lda") throw IoError("model file is not an LDA model");
        return lda_from(j);
    } catch (const json::exception& e) {
        throw IoError(std::string("malformed LDA model: ") + e.what());
    }
}

BaggingEnsemble parse_bagging(const std::string& text) {
    const json j = parse_json(text);
    try {
        if (j.at("type") != "bagging") throw IoError("model file is not a bagging ensemble");
        BaggingEnsemble e;
        e.rounds = j.at("rounds").get<int>();
        e.subset_fraction = j.at("subset_fraction").get<double>();
        e.seed = j.at("seed").get<std::uint64_t>();
        for (const json& c : j.at("components")) e.components.push_back(lda_from(c));
        if (static_cast<int>(e.components.size()) != e.rounds) {
            throw IoError("bagging model lists " + std::to_string(e.components.size()) +
                          " components for " + std::to_string(e.rounds) + " rounds");
        }
        return e;
    } catch (const json::exception& ex) {
        throw IoError(std::string("malformed bagging model: ") + ex.what());
    }
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
    if (path.has_parent_path()) {
        std::error_code ec;
        std::filesystem::create_directories(path.parent_path(), ec);
    }
    std::ofstream out(path);
    if (!out) throw IoError(path.string() + ": cannot open for writing");
    out << text;
    if (!text.empty() && text.back() != '\n') out << '\n';
    if (!out) throw IoError(path.string() + ": write failed");
}

std::string read_text_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError(path.string() + ": cannot open");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace mibci
