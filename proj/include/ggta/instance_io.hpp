#pragma once

// File forms used by the command-line tool: allocation instances (JSON),
// strategy CSVs and atomic output files.
//
// Instance file:
//   {
//     "gamma":   [10, 10],          one per task
//     "signals": [0.2, 0.4],        one per task, in [0,1]
//     "costs":   [[0, 0]],          one row per group, one entry per task
//     "counts":  [[5, 0, 0]]        one row per group: idle, then task 1..M
//   }

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <system_error>

#include <fmt/format.h>
#include <json.hpp>

#include "ggta/game.hpp"
#include "ggta/scenario.hpp"

namespace ggta {

/// Malformed input, with the source name and line already in the message.
class InstanceError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

namespace detail {

/// Line of the first `"key"` token, or 1 when the key is absent.
inline std::size_t key_line(const std::string& text, const std::string& key) {
    const auto pos = text.find("\"" + key + "\"");
    return pos == std::string::npos ? 1 : line_of(text, pos);
}

}  // namespace detail

inline ProblemInstance parse_instance(const std::string& text, const std::string& source = "<instance>") {
    nlohmann::json j;
    try {
        j = parse_json_text(text, source);
    } catch (const ScenarioError& e) {
        throw InstanceError(e.what());
    }
    auto fail = [&](const std::string& key, const std::string& what) -> InstanceError {
        return InstanceError(fmt::format("{}:{}: {}", source, detail::key_line(text, key), what));
    };
    if (!j.is_object()) throw InstanceError(source + ":1: expected a JSON object");
    for (auto it = j.begin(); it != j.end(); ++it) {
        const auto& k = it.key();
        if (k != "gamma" && k != "signals" && k != "costs" && k != "counts") throw fail(k, "unknown key '" + k + "'");
    }
    for (const char* key : {"gamma", "signals", "costs", "counts"}) {
        if (!j.contains(key)) throw fail(key, fmt::format("missing key '{}'", key));
    }

    ProblemInstance inst;
    std::vector<double> gamma;
    std::vector<std::vector<double>> costs;
    std::vector<std::vector<int>> counts;
    auto read = [&](const char* key, auto& out) {
        try {
            out = j.at(key).get<std::remove_reference_t<decltype(out)>>();
        } catch (const nlohmann::json::exception& e) {
            throw fail(key, fmt::format("'{}': {}", key, e.what()));
        }
    };
    read("gamma", gamma);
    read("signals", inst.signals);
    read("costs", costs);
    read("counts", counts);

    const std::size_t m = gamma.size();
    for (std::size_t k = 0; k < m; ++k) inst.tasks.push_back({static_cast<int>(k + 1), gamma[k]});
    if (inst.signals.size() != m) throw fail("signals", fmt::format("'signals' needs {} entries", m));
    if (costs.size() != counts.size()) throw fail("counts", "'costs' and 'counts' need one row per group");
    inst.counts = AssignmentCounts(counts.size(), m + 1, 0);
    for (std::size_t i = 0; i < costs.size(); ++i) {
        if (costs[i].size() != m) throw fail("costs", fmt::format("'costs' row {} needs {} entries", i + 1, m));
        if (counts[i].size() != m + 1) throw fail("counts", fmt::format("'counts' row {} needs {} entries", i + 1, m + 1));
        inst.groups.push_back({static_cast<int>(i + 1), costs[i]});
        for (std::size_t a = 0; a <= m; ++a) inst.counts(i, a) = counts[i][a];
    }
    try {
        inst.validate();
    } catch (const ContractViolation& e) {
        throw InstanceError(fmt::format("{}:1: {}", source, e.what()));
    }
    return inst;
}

inline ProblemInstance load_instance(const std::string& path) {
    std::string text;
    try {
        text = read_text_file(path);
    } catch (const ScenarioError& e) {
        throw InstanceError(e.what());
    }
    return parse_instance(text, path);
}

/// `group,action,probability` rows for every probability above 1e-12,
/// groups 1-based and action 0 meaning idle.
inline void write_strategy_csv(std::ostream& out, const MixedStrategy& s) {
    out << "group,action,probability\n";
    for (std::size_t i = 0; i < s.num_groups(); ++i) {
        for (std::size_t a = 0; a < s.num_actions(); ++a) {
            if (s(i, a) > kZeroTol) out << fmt::format("{},{},{}\n", i + 1, a, fmt::format("{:.15g}", s(i, a)));
        }
    }
}

inline std::string format_report(const EquilibriumReport& r) {
    return fmt::format("valid {}\nmax_support_residual {:.3e}\nmax_dominance_violation {:.3e}\n",
                       r.valid ? "true" : "false", r.max_support_residual, r.max_dominance_violation);
}

/// Writes through a sibling temporary file and renames it into place, so a
/// failed writer never leaves a partial `path` behind.
inline void write_file_atomic(const std::filesystem::path& path, const std::function<void(std::ostream&)>& writer) {
    auto tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot write " + tmp.string());
        try {
            writer(out);
        } catch (...) {
            out.close();
            std::error_code ec;
            std::filesystem::remove(tmp, ec);
            throw;
        }
        out.flush();
        if (!out) {
            out.close();
            std::error_code ec;
            std::filesystem::remove(tmp, ec);
            throw std::runtime_error("write failed for " + tmp.string());
        }
    }
    std::filesystem::rename(tmp, path);
}

}  // namespace ggta
