#include "windice/io.hpp"

#include <fstream>

namespace windice {

Json matroid_to_json(const Matroid& m) {
    switch (m.kind()) {
        case Matroid::Kind::Uniform:
            return Json{{"kind", "uniform"}, {"k", m.uniform_k()}};
        case Matroid::Kind::Partition:
            return Json{{"kind", "partition"},
                        {"blocks", m.partition_blocks()},
                        {"caps", m.partition_caps()}};
        case Matroid::Kind::Explicit: {
            // maximal sets are enough; the loader takes the downward closure
            Json indep = Json::array();
            const auto& family = m.explicit_sets();
            for (CandidateSet s : family) {
                bool maximal = true;
                for (CandidateSet t : family)
                    if (t != s && (t & s) == s) maximal = false;
                if (!maximal) continue;
                std::vector<int> members;
                for (int e = 0; e < m.ground_size(); ++e)
                    if ((s >> e) & 1) members.push_back(e);
                indep.push_back(members);
            }
            return Json{{"kind", "explicit"}, {"independent", indep}};
        }
    }
    throw std::logic_error("unknown matroid kind");
}

Matroid matroid_from_json(const Json& j, int ground_size_hint) {
    if (!j.contains("kind")) throw std::runtime_error("matroid: missing 'kind'");
    std::string kind = j.at("kind").get<std::string>();
    if (kind == "uniform") {
        if (!j.contains("k")) throw std::runtime_error("matroid: uniform needs 'k'");
        int n = ground_size_hint;
        if (j.contains("n")) n = j.at("n").get<int>();
        if (n < 0) throw std::runtime_error("matroid: uniform needs 'n' (ground size)");
        return Matroid::uniform(n, j.at("k").get<int>());
    }
    if (kind == "partition") {
        if (!j.contains("blocks") || !j.contains("caps"))
            throw std::runtime_error("matroid: partition needs 'blocks' and 'caps'");
        auto blocks = j.at("blocks").get<std::vector<std::vector<int>>>();
        auto caps = j.at("caps").get<std::vector<int>>();
        int n = ground_size_hint;
        for (const auto& b : blocks)
            for (int e : b) n = std::max(n, e + 1);
        return Matroid::partition(n, std::move(blocks), std::move(caps));
    }
    if (kind == "explicit") {
        if (!j.contains("independent"))
            throw std::runtime_error("matroid: explicit needs 'independent'");
        auto indep = j.at("independent").get<std::vector<std::vector<int>>>();
        int n = ground_size_hint;
        for (const auto& s : indep)
            for (int e : s) n = std::max(n, e + 1);
        // non-matroid families are legal inputs (the evaluators only need a
        // downward-closed family); matroid-only operations check is_matroid
        return Matroid::explicit_family(n, indep, /*require_matroid=*/false);
    }
    throw std::runtime_error("matroid: unknown kind '" + kind + "'");
}

Json load_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    Json j;
    try {
        in >> j;
    } catch (const nlohmann::json::parse_error& e) {
        throw std::runtime_error(path + ": " + e.what());
    }
    return j;
}

void save_json_file(const std::string& path, const Json& j) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path + " for writing");
    out << j.dump(2) << '\n';
}

PersuasionInstance persuasion_instance_from_json(const Json& j) {
    if (!j.contains("actions")) throw std::runtime_error("persuasion file: missing 'actions'");
    PersuasionInstance inst;
    for (const auto& action : j.at("actions")) {
        if (!action.contains("types"))
            throw std::runtime_error("persuasion file: action missing 'types'");
        std::vector<ActionType> types;
        for (const auto& t : action.at("types")) {
            ActionType at;
            at.prob = scalar_from_json<Rational>(t.at("prob"), "prob");
            at.sender = scalar_from_json<Rational>(t.at("sender"), "sender");
            const Json& r = t.at("receiver");
            if (r.is_string() && (r.get<std::string>() == "-inf" || r.get<std::string>() == "-infinity")) {
                at.receiver_neg_inf = true;
            } else {
                at.receiver = scalar_from_json<Rational>(r, "receiver");
            }
            types.push_back(std::move(at));
        }
        inst.actions.push_back(std::move(types));
    }
    return inst;
}

Scheme scheme_from_json(const Json& j, const PersuasionInstance& inst) {
    if (!j.contains("rec")) throw std::runtime_error("scheme file: missing 'rec'");
    Scheme scheme;
    for (const auto& row : j.at("rec")) {
        std::vector<Rational> dist;
        for (const auto& v : row) dist.push_back(scalar_from_json<Rational>(v, "rec"));
        scheme.rec.push_back(std::move(dist));
    }
    if (static_cast<long>(scheme.rec.size()) != inst.num_profiles())
        throw std::runtime_error("scheme file: one row per type profile required");
    return scheme;
}

}  // namespace windice
