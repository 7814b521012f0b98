#include "mibci/archive.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "mibci/error.hpp"

namespace mibci {
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

Label parse_label(const json& j, const fs::path& meta) {
    if (j.is_null()) return Label::kUnlabeled;
    if (!j.is_string()) {
        throw IoError(meta.string() + ": trial label must be a string or null");
    }
    const std::string s = j.get<std::string>();
    if (s == "-1" || s == "hand" || s == "left") return Label::kNeg;
    if (s == "+1" || s == "1" || s == "foot" || s == "right") return Label::kPos;
    throw IoError(meta.string() + ": unknown label \"" + s + "\"");
}

Signal read_matrix(const fs::path& file, Eigen::Index n_channels) {
    std::ifstream in(file);
    if (!in) throw IoError(file.string() + ": cannot open trial file");

    std::vector<double> values;
    std::string line;
    Eigen::Index n_rows = 0;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        Eigen::Index n_cols = 0;
        const char* p = line.data();
        const char* end = line.data() + line.size();
        while (p <= end) {
            const char* comma = std::find(p, end, ',');
            while (p < comma && *p == ' ') ++p;
            double v = 0.0;
            auto [ptr, ec] = std::from_chars(p, comma, v);
            while (ptr < comma && *ptr == ' ') ++ptr;
            if (ec != std::errc() || ptr != comma) {
                throw IoError(file.string() + ": unparsable value on row " +
                              std::to_string(n_rows + 1));
            }
            if (!std::isfinite(v)) {
                throw IoError(file.string() + ": non-finite value on row " +
                              std::to_string(n_rows + 1));
            }
            values.push_back(v);
            ++n_cols;
            p = comma + 1;
        }
        if (n_cols != n_channels) {
            throw IoError(file.string() + ": row " + std::to_string(n_rows + 1) + " has " +
                          std::to_string(n_cols) + " columns but metadata declares " +
                          std::to_string(n_channels) + " channels");
        }
        ++n_rows;
    }
    // Stored samples x channels; in memory channels x samples.
    Signal m(n_channels, n_rows);
    for (Eigen::Index r = 0; r < n_rows; ++r) {
        for (Eigen::Index c = 0; c < n_channels; ++c) {
            m(c, r) = values[static_cast<std::size_t>(r * n_channels + c)];
        }
    }
    return m;
}

void write_matrix(const fs::path& file, const Signal& data) {
    std::ofstream out(file);
    if (!out) throw IoError(file.string() + ": cannot open for writing");
    char buf[64];
    std::string line;
    for (Eigen::Index s = 0; s < data.cols(); ++s) {
        line.clear();
        for (Eigen::Index c = 0; c < data.rows(); ++c) {
            if (c) line.push_back(',');
            auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), data(c, s),
                                           std::chars_format::general, 17);
            line.append(buf, ptr);
        }
        line.push_back('\n');
        out << line;
    }
    if (!out) throw IoError(file.string() + ": write failed");
}

std::string trial_file_name(int session_id, int position) {
    char buf[48];
    std::snprintf(buf, sizeof(buf), "s%02d_t%04d.csv", session_id, position);
    return buf;
}

}  // namespace

TrialSet load_archive(const fs::path& dir) {
    const fs::path meta_path = dir / "meta.json";
    std::ifstream in(meta_path);
    if (!in) throw IoError(meta_path.string() + ": metadata file missing");

    json meta;
    try {
        in >> meta;
    } catch (const json::exception& e) {
        throw IoError(meta_path.string() + ": malformed metadata: " + e.what());
    }

    try {
        const int version = meta.at("version").get<int>();
        if (version != kArchiveVersion) {
            throw IoError(meta_path.string() + ": unknown archive format version " +
                          std::to_string(version));
        }
        const double fs_hz = meta.at("sampling_rate_hz").get<double>();
        auto labels = meta.at("channel_labels").get<std::vector<std::string>>();
        const auto n_ch = static_cast<Eigen::Index>(labels.size());

        std::vector<Trial> trials;
        for (const json& session : meta.at("sessions")) {
            const int sid = session.at("id").get<int>();
            int index = 0;
            for (const json& jt : session.at("trials")) {
                const fs::path file = dir / jt.at("file").get<std::string>();
                Trial t;
                t.data = read_matrix(file, n_ch);
                t.label = parse_label(jt.contains("label") ? jt.at("label") : json(nullptr),
                                      meta_path);
                t.session_id = sid;
                t.trial_index = index++;
                if (!trials.empty() && t.samples() != trials.front().samples()) {
                    throw IoError(file.string() + ": has " + std::to_string(t.samples()) +
                                  " samples, other trials have " +
                                  std::to_string(trials.front().samples()));
                }
                trials.push_back(std::move(t));
            }
        }
        try {
            return TrialSet(std::move(trials), fs_hz, std::move(labels));
        } catch (const InvalidArgument& e) {
            throw IoError(meta_path.string() + ": " + e.what());
        }
    } catch (const json::exception& e) {
        throw IoError(meta_path.string() + ": malformed metadata: " + e.what());
    }
}

void save_archive(const TrialSet& set, const fs::path& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw IoError(dir.string() + ": cannot create directory: " + ec.message());

    json sessions = json::array();
    int position = 0;
    for (const Trial& t : set.trials()) {
        if (sessions.empty() || sessions.back().at("id").get<int>() != t.session_id) {
            sessions.push_back({{"id", t.session_id}, {"trials", json::array()}});
            position = 0;
        }
        const std::string name = trial_file_name(t.session_id, position++);
        json label = nullptr;
        if (t.label == Label::kNeg) label = "-1";
        if (t.label == Label::kPos) label = "+1";
        sessions.back()["trials"].push_back({{"file", name}, {"label", label}});
        write_matrix(dir / name, t.data);
    }

    json meta = {
        {"version", kArchiveVersion},
        {"sampling_rate_hz", set.sampling_rate_hz()},
        {"channel_labels", set.channel_labels()},
        {"sessions", sessions},
    };
    const fs::path meta_path = dir / "meta.json";
    std::ofstream out(meta_path);
    if (!out) throw IoError(meta_path.string() + ": cannot open for writing");
    out << meta.dump(2) << '\n';
    if (!out) throw IoError(meta_path.string() + ": write failed");
}

}  // namespace mibci
