/*
   Copyright 2026 The polyembed Authors

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

        http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License.
*/

#ifndef POLYEMBED_JSON_IO_HPP
#define POLYEMBED_JSON_IO_HPP

// Stable-key-order JSON for certificates and results, and the reverse
// direction for certificates replayed through `task verify`.

#include <json.hpp>

#include <string>
#include <vector>

#include "embed.hpp"
#include "expr.hpp"
#include "lnd.hpp"
#include "normalize.hpp"

namespace polyembed {

using Json = nlohmann::ordered_json;

inline constexpr int kSchemaVersion = 1;

inline Json tower_to_json(const TowerPtr& t) {
    std::vector<TowerPtr> chain;
    for (TowerPtr n = t; n; n = n->parent()) chain.push_back(n);
    Json out = Json::array();
    for (auto it = chain.rbegin(); it != chain.rend(); ++it) {
        const TowerPtr& n = *it;
        Json step;
        switch (n->kind()) {
            case StepKind::Base:
                step["name"] = "Q";
                step["kind"] = "base";
                break;
            case StepKind::Algebraic:
                step["name"] = n->name();
                step["kind"] = "algebraic";
                step["minpoly"] = n->minpoly().to_string(n->name());
                break;
            case StepKind::Transcendental:
                step["name"] = n->name();
                step["kind"] = "transcendental";
                break;
        }
        out.push_back(step);
    }
    return out;
}

inline TowerPtr tower_from_json(const Json& j) {
    if (!j.is_array() || j.empty() || j[0].at("kind") != "base")
        throw Error(ErrorKind::VerificationFailed, "field tower must start with the base field");
    TowerPtr t = Tower::rationals();
    for (std::size_t i = 1; i < j.size(); ++i) {
        const std::string kind = j[i].at("kind").get<std::string>();
        const std::string name = j[i].at("name").get<std::string>();
        if (kind == "algebraic") {
            KPoly mp = eval_kpoly(parse_expression(j[i].at("minpoly").get<std::string>()), t, name);
            t = adjoin_algebraic(t, name, mp);
        } else if (kind == "transcendental") {
            t = Tower::extend_transcendental(t, name);
        } else {
            throw Error(ErrorKind::VerificationFailed, "unknown tower step kind " + kind);
        }
    }
    return t;
}

inline Json verification_to_json(const VerificationReport& r) {
    Json out;
    out["bound"] = r.bound;
    Json table = Json::array();
    for (const auto& [a, b] : r.degree_table) table.push_back(Json::array({a, b}));
    out["degree_table"] = table;
    out["ranks"] = Json{{"source", r.ranks_source}, {"image", r.ranks_image}};
    out["trdeg_source"] = r.trdeg_source;
    out["trdeg_image"] = r.trdeg_image;
    out["trdeg_leading"] = r.trdeg_leading;
    out["witnesses"] = r.witnesses;
    Json checks = Json::array();
    for (const auto& c : r.checks) checks.push_back(Json{{"name", c.name}, {"passed", c.passed}, {"detail", c.detail}});
    out["checks"] = checks;
    out["passed"] = r.passed;
    return out;
}

inline Json expression_to_json(const GenExpression& e) {
    Json out = Json::array();
    for (const auto& [exps, c] : e) out.push_back(Json{{"exponents", exps}, {"coefficient", c.to_string()}});
    return out;
}

/// Certificate fields in the published order; the problem supplies K for the coefficient map.
inline Json certificate_to_json(const EmbeddingCertificate& c, const Presentation& p) {
    Json out;
    out["case"] = to_string(c.kind);
    out["field_tower"] = tower_to_json(c.field);
    out["t"] = c.t;
    out["d"] = c.d;
    Json images = Json::array();
    for (const auto& im : c.images) images.push_back(im.to_string(c.t));
    out["images"] = images;
    Json adj = Json::array();
    for (const auto& a : c.adjunctions) adj.push_back(Json{{"name", a.name}, {"kind", a.kind}, {"relation", a.relation}});
    out["adjunctions"] = adj;
    out["verification"] = verification_to_json(c.verification);
    out["field"] = c.field->describe();
    out["t_weight"] = c.t_weight;
    out["c"] = c.c.to_string();
    out["e"] = c.e;
    out["u0"] = c.u0 ? Json(c.u0->to_string()) : Json(nullptr);
    Json cmap = Json::array();
    for (int dpt = 1; dpt <= p.ambient->depth(); ++dpt) {
        const TowerPtr node = p.ambient->at_depth(dpt);
        cmap.push_back(Json{{"generator", node->name()}, {"image", c.coefficient_map.images()[static_cast<std::size_t>(dpt - 1)].to_string()}});
    }
    out["coefficient_map"] = cmap;
    out["r_expression"] = expression_to_json(c.r_expression);
    Json rej = Json::array();
    for (const auto& a : c.rejected)
        rej.push_back(Json{{"u0", a.u0}, {"bound", a.bound}, {"reason", a.reason}, {"witness", a.witness}});
    out["rejected"] = rej;
    Json disc = Json::array();
    for (const auto& r : c.discovery) {
        Json gens = Json::array();
        for (const auto& g : r.generators) gens.push_back(g.to_string());
        disc.push_back(Json{{"bound", r.bound}, {"lattice", r.lattice}, {"generators", gens}, {"sources", r.sources}, {"trdeg", r.trdeg}});
    }
    out["discovery"] = disc;
    return out;
}

/// Rebuilds a certificate for re-verification against the problem's presentation.
inline EmbeddingCertificate certificate_from_json(const Json& j, const Presentation& p) {
    try {
        EmbeddingCertificate c;
        const std::string kind = j.at("case").get<std::string>();
        if (kind == to_string(EmbedCase::AlgebraicCoefficients)) c.kind = EmbedCase::AlgebraicCoefficients;
        else if (kind == to_string(EmbedCase::Specialized)) c.kind = EmbedCase::Specialized;
        else throw Error(ErrorKind::VerificationFailed, "unknown certificate case " + kind);
        c.field = tower_from_json(j.at("field_tower"));
        c.t = j.at("t").get<std::string>();
        c.d = j.at("d").get<int>();
        c.t_weight = j.at("t_weight").get<int>();
        if (c.t_weight < 1) throw Error(ErrorKind::VerificationFailed, "t weight must be positive");
        c.e = j.at("e").get<int>();
        c.c = eval_field(parse_expression(j.at("c").get<std::string>()), c.field);
        if (!j.at("u0").is_null()) c.u0 = eval_field(parse_expression(j.at("u0").get<std::string>()), c.field);
        for (const auto& im : j.at("images")) c.images.push_back(eval_kpoly(parse_expression(im.get<std::string>()), c.field, c.t));
        for (const auto& a : j.at("adjunctions"))
            c.adjunctions.push_back({a.at("name").get<std::string>(), a.at("kind").get<std::string>(), a.at("relation").get<std::string>()});
        std::vector<FieldElement> cmap;
        const Json& cm = j.at("coefficient_map");
        if (static_cast<int>(cm.size()) != p.ambient->depth())
            throw Error(ErrorKind::VerificationFailed, "coefficient map does not match the ambient field");
        for (int dpt = 1; dpt <= p.ambient->depth(); ++dpt) {
            const Json& entry = cm[static_cast<std::size_t>(dpt - 1)];
            if (entry.at("generator").get<std::string>() != p.ambient->at_depth(dpt)->name())
                throw Error(ErrorKind::VerificationFailed, "coefficient map generator order differs");
            cmap.push_back(eval_field(parse_expression(entry.at("image").get<std::string>()), c.field));
        }
        c.coefficient_map = TowerMap(p.ambient, c.field, cmap);
        for (const auto& term : j.at("r_expression"))
            c.r_expression.emplace(term.at("exponents").get<std::vector<int>>(),
                                   eval_field(parse_expression(term.at("coefficient").get<std::string>()), p.coeff));
        for (const auto& a : j.at("rejected"))
            c.rejected.push_back({a.at("u0").get<std::string>(), a.at("bound").get<int>(), a.at("reason").get<std::string>(),
                                  a.at("witness").get<std::string>()});
        return c;
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorKind::VerificationFailed, std::string("malformed certificate: ") + e.what());
    } catch (const SyntaxError& e) {
        throw Error(ErrorKind::VerificationFailed, std::string("malformed expression in certificate: ") + e.what());
    } catch (const NameError& e) {
        throw Error(ErrorKind::VerificationFailed, std::string("certificate names: ") + e.what());
    }
}

inline Json normalization_to_json(const NormalizationResult& n, const std::string& var) {
    Json out;
    out["theta"] = n.theta.to_string(var);
    out["e"] = n.e;
    Json ex = Json::array();
    for (const auto& e : n.expressions) ex.push_back(e.to_string("theta"));
    out["expressions"] = ex;
    out["luroth_generator"] = n.luroth.to_string(var);
    return out;
}

inline Json conductor_to_json(const ConductorResult& c) {
    Json out;
    out["exact"] = c.exact;
    out["exponent"] = c.exact ? Json(c.exponent) : Json(nullptr);
    out["h"] = c.h ? Json(c.h->to_string("theta")) : Json(nullptr);
    Json basis = Json::array();
    for (const auto& b : c.basis) basis.push_back(b.to_string("theta"));
    out["basis"] = basis;
    out["bound"] = c.bound;
    out["verified"] = c.verified;
    return out;
}

inline Json nilpotency_to_json(const NilpotencyVerdict& v, const std::vector<std::string>& names) {
    Json out;
    out["verdict"] = to_string(v.verdict);
    Json idx;
    for (std::size_t i = 0; i < names.size() && i < v.indices.size(); ++i)
        idx[names[i]] = v.indices[i] < 0 ? Json(nullptr) : Json(v.indices[i]);
    out["indices"] = idx.is_null() ? Json::object() : idx;
    out["bound"] = v.bound;
    out["triangular"] = v.triangular;
    out["witness"] = v.witness.empty() ? Json(nullptr) : Json(v.witness);
    return out;
}

inline Json trace_to_json(const CancellationTrace& tr) {
    Json steps = Json::array();
    for (const auto& s : tr.steps) steps.push_back(Json{{"name", s.name}, {"statement", s.statement}, {"verified", s.verified}});
    Json out;
    out["steps"] = steps;
    out["h_is_unit"] = tr.h_is_unit;
    out["verdict"] = tr.verdict;
    return out;
}

}  // namespace polyembed

#endif  // POLYEMBED_JSON_IO_HPP
