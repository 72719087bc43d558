#pragma once

#include <fstream>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "windice/dice.hpp"
#include "windice/persuasion.hpp"
#include "windice/types.hpp"

namespace windice {

using Json = nlohmann::ordered_json;

Json matroid_to_json(const Matroid& m);
// ground_size_hint supplies the candidate count when the representation
// itself does not carry it (the uniform kind).
Matroid matroid_from_json(const Json& j, int ground_size_hint = -1);
Json load_json_file(const std::string& path);
void save_json_file(const std::string& path, const Json& j);

template <class S>
S scalar_from_json(const Json& v, const std::string& field) {
    if (v.is_string()) {
        Rational r = Rational::parse(v.get<std::string>());
        if constexpr (scalar_traits<S>::exact)
            return r;
        else
            return r.to_double();
    }
    if (v.is_number_integer())
        return scalar_traits<S>::from_double(static_cast<double>(v.get<long>()));
    if (v.is_number_float()) return scalar_traits<S>::from_double(v.get<double>());
    throw std::runtime_error("field '" + field + "' must be a number or a \"p/q\" string");
}

template <class S>
Json scalar_to_json(const S& v) {
    if constexpr (scalar_traits<S>::exact)
        return Json(v.str());
    else
        return Json(v);
}

template <class S>
Environment<S> environment_from_json(const Json& j) {
    if (!j.contains("candidates")) throw std::runtime_error("environment file: missing 'candidates'");
    if (!j.contains("matroid")) throw std::runtime_error("environment file: missing 'matroid'");
    std::vector<std::vector<S>> prior;
    std::vector<std::vector<std::string>> names;
    for (const auto& cand : j.at("candidates")) {
        if (!cand.contains("types")) throw std::runtime_error("environment file: candidate missing 'types'");
        std::vector<S> f;
        std::vector<std::string> nm;
        for (const auto& type : cand.at("types")) {
            if (!type.contains("prob")) throw std::runtime_error("environment file: type missing 'prob'");
            f.push_back(scalar_from_json<S>(type.at("prob"), "prob"));
            nm.push_back(type.contains("name") ? type.at("name").get<std::string>()
                                               : std::to_string(nm.size()));
        }
        prior.push_back(std::move(f));
        names.push_back(std::move(nm));
    }
    const int n = static_cast<int>(prior.size());
    return Environment<S>(std::move(prior), matroid_from_json(j.at("matroid"), n),
                          std::move(names));
}

template <class S>
Json environment_to_json(const Environment<S>& env) {
    Json candidates = Json::array();
    for (int i = 0; i < env.num_candidates(); ++i) {
        Json types = Json::array();
        for (int l = 0; l < env.types_of(i); ++l) {
            int g = env.offset(i) + l;
            types.push_back(Json{{"name", env.type_name(g)}, {"prob", scalar_to_json(env.f(g))}});
        }
        candidates.push_back(Json{{"types", types}});
    }
    return Json{{"candidates", candidates}, {"matroid", matroid_to_json(env.matroid())}};
}

template <class S>
InterimRule<S> interim_from_json(const Json& j, const Environment<S>& env) {
    if (!j.contains("x")) throw std::runtime_error("interim rule file: missing 'x'");
    InterimRule<S> rule;
    rule.x.assign(env.num_types(), scalar_traits<S>::zero());
    const Json& x = j.at("x");
    for (int g = 0; g < env.num_types(); ++g) {
        std::string key = env.type_key(g);
        if (!x.contains(key))
            throw std::runtime_error("interim rule file: missing type key '" + key + "'");
        rule.x[g] = scalar_from_json<S>(x.at(key), key);
    }
    rule.validate(env);
    return rule;
}

template <class S>
Json interim_to_json(const InterimRule<S>& rule, const Environment<S>& env) {
    Json x = Json::object();
    for (int g = 0; g < env.num_types(); ++g) x[env.type_key(g)] = scalar_to_json(rule(g));
    return Json{{"x", x}};
}

template <class S>
DiceSystem<S> dice_from_json(const Json& j, const Environment<S>& env) {
    if (!j.contains("dice")) throw std::runtime_error("dice file: missing 'dice'");
    const Json& d = j.at("dice");
    DiceSystem<S> dice;
    for (int g = 0; g < env.num_types(); ++g) {
        std::string key = env.type_key(g);
        if (!d.contains(key)) throw std::runtime_error("dice file: missing type key '" + key + "'");
        std::vector<Face<S>> faces;
        for (const auto& fv : d.at(key)) {
            if (!fv.is_array() || fv.size() != 2)
                throw std::runtime_error("dice file: faces must be [value, prob] pairs");
            faces.push_back({fv.at(0).get<double>(), scalar_from_json<S>(fv.at(1), key)});
        }
        dice.die.push_back(Die<S>(std::move(faces)));
    }
    return dice;
}

template <class S>
Json dice_to_json(const DiceSystem<S>& dice, const Environment<S>& env) {
    Json d = Json::object();
    for (int g = 0; g < env.num_types(); ++g) {
        Json faces = Json::array();
        for (const auto& face : dice.at(g).faces())
            faces.push_back(Json::array({face.value, scalar_to_json(face.prob)}));
        d[env.type_key(g)] = faces;
    }
    return Json{{"dice", d}};
}

// Symmetric (i.i.d.) inputs: a single shared type list and rule.
template <class S>
std::pair<std::vector<S>, std::vector<std::string>> shared_prior_from_json(const Json& j) {
    if (!j.contains("types")) throw std::runtime_error("prior file: missing 'types'");
    std::vector<S> f;
    std::vector<std::string> names;
    for (const auto& type : j.at("types")) {
        if (!type.contains("prob")) throw std::runtime_error("prior file: type missing 'prob'");
        f.push_back(scalar_from_json<S>(type.at("prob"), "prob"));
        names.push_back(type.contains("name") ? type.at("name").get<std::string>()
                                              : std::to_string(names.size()));
    }
    return {f, names};
}

template <class S>
std::vector<S> shared_interim_from_json(const Json& j, const std::vector<std::string>& names) {
    if (!j.contains("x")) throw std::runtime_error("interim rule file: missing 'x'");
    std::vector<S> x;
    for (const auto& name : names) {
        if (!j.at("x").contains(name))
            throw std::runtime_error("interim rule file: missing type key '" + name + "'");
        x.push_back(scalar_from_json<S>(j.at("x").at(name), name));
    }
    return x;
}

PersuasionInstance persuasion_instance_from_json(const Json& j);
Scheme scheme_from_json(const Json& j, const PersuasionInstance& inst);

}  // namespace windice
