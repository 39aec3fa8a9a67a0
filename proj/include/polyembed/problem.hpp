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

#ifndef POLYEMBED_PROBLEM_HPP
#define POLYEMBED_PROBLEM_HPP

/*
 * Problem files, one declaration per line:
 *
 *   field NAME = Q | FIELD | FIELD(u)
 *   extend NAME = FIELD adjoin a minpoly EXPR
 *   ring NAME = FIELD[x, ...]
 *   gens NAME in RING [over FIELD] = { EXPR, ... }
 *   derivation NAME on RING = { EXPR -> EXPR, ... }
 *   task KIND NAME [key=value ...]
 *
 * with '#' comments. Exactly one task per file.
 */

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "json_io.hpp"

namespace polyembed {

inline constexpr const char* kToolVersion = "0.1.0";

struct FieldDecl {
    TowerPtr tower;
};

struct RingDecl {
    TowerPtr coeff;
    std::vector<std::string> vars;
};

struct GensDecl {
    std::string ring;
    TowerPtr over;
    std::vector<KPoly> upoly;  // univariate rings
    std::vector<MPoly> mpoly;  // rings over Q
    int line = 0;
};

struct DerivationDecl {
    std::string ring;
    std::vector<std::pair<MPoly, MPoly>> rules;
    int line = 0;
};

struct OptionValue {
    Token token;
    std::optional<Expr> expr;  // absent for string values
};

struct TaskDecl {
    std::string kind;
    std::string target;
    std::map<std::string, OptionValue> options;
    int line = 0, col = 0;
};

struct ProblemFile {
    std::string directory;  // for relative certificate paths
    std::uint64_t hash = 0;
    std::map<std::string, FieldDecl> fields;
    std::map<std::string, RingDecl> rings;
    std::map<std::string, GensDecl> gens;
    std::map<std::string, DerivationDecl> derivations;
    std::optional<TaskDecl> task;
};

/// FNV-1a, for a stable input fingerprint in reports.
inline std::uint64_t fnv1a(const std::string& s) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

namespace detail {

inline const std::map<std::string, std::vector<std::string>>& task_keys() {
    static const std::map<std::string, std::vector<std::string>> keys{
        {"embed", {"bound", "seed", "retries"}},
        {"sagbi", {"bound", "member"}},
        {"normalize", {}},
        {"conductor", {"bound", "ext_bound"}},
        {"lnd", {"bound", "slice", "expand", "r", "closure"}},
        {"cancel", {"derivation", "bound"}},
        {"verify", {"certificate"}},
    };
    return keys;
}

class Parser {
public:
    explicit Parser(ProblemFile& pf) : pf_(pf) { pf_.fields["Q"] = {Tower::rationals()}; }

    void line(const std::string& text, int lineno) {
        TokenStream ts(tokenize(text, lineno));
        if (ts.at_end()) return;
        if (ts.at_keyword("field")) field(ts);
        else if (ts.at_keyword("extend")) extend(ts);
        else if (ts.at_keyword("ring")) ring(ts);
        else if (ts.at_keyword("gens")) gens(ts);
        else if (ts.at_keyword("derivation")) derivation(ts);
        else if (ts.at_keyword("task")) task(ts);
        else ts.fail({"'field'", "'extend'", "'ring'", "'gens'", "'derivation'", "'task'"});
        ts.expect_end();
    }

    void finish(int last_line) {
        if (!pf_.task) throw SyntaxError(last_line, 1, {"'task'"}, "end of input");
    }

private:
    Token new_name(TokenStream& ts) {
        Token t = ts.expect_name();
        if (pf_.fields.count(t.text) || pf_.rings.count(t.text) || pf_.gens.count(t.text) || pf_.derivations.count(t.text))
            throw SyntaxError(t.line, t.col, {"new name"}, "'" + t.text + "' (already declared)");
        return t;
    }

    TowerPtr field_ref(TokenStream& ts) {
        Token t = ts.expect_name("field name");
        auto it = pf_.fields.find(t.text);
        if (it == pf_.fields.end()) throw NameError(t.line, t.col, t.text, "undefined field");
        return it->second.tower;
    }

    void field(TokenStream& ts) {
        ts.next();
        Token name = new_name(ts);
        ts.expect_symbol("=");
        TowerPtr base = field_ref(ts);
        if (ts.at_symbol("(")) {
            ts.next();
            std::vector<Token> vars{ts.expect_name("variable")};
            while (ts.at_symbol(",")) {
                ts.next();
                vars.push_back(ts.expect_name("variable"));
            }
            ts.expect_symbol(")");
            if (vars.size() > 1)
                throw Error(ErrorKind::UnsupportedTowerShape, std::to_string(name.line) + ":" + std::to_string(name.col) +
                                                                  ": at most one transcendental generator is supported");
            base = Tower::extend_transcendental(base, vars[0].text);
        }
        pf_.fields[name.text] = {base};
    }

    void extend(TokenStream& ts) {
        ts.next();
        Token name = new_name(ts);
        ts.expect_symbol("=");
        TowerPtr base = field_ref(ts);
        ts.expect_keyword("adjoin");
        Token gen = ts.expect_name("generator name");
        ts.expect_keyword("minpoly");
        Expr e = parse_expression(ts);
        KPoly mp = eval_kpoly(e, base, gen.text);
        pf_.fields[name.text] = {adjoin_algebraic(base, gen.text, mp)};
    }

    void ring(TokenStream& ts) {
        ts.next();
        Token name = new_name(ts);
        ts.expect_symbol("=");
        TowerPtr coeff = field_ref(ts);
        ts.expect_symbol("[");
        std::vector<std::string> vars{ts.expect_name("variable").text};
        while (ts.at_symbol(",")) {
            ts.next();
            Token v = ts.expect_name("variable");
            for (const auto& w : vars)
                if (w == v.text) throw SyntaxError(v.line, v.col, {"distinct variable"}, "'" + v.text + "'");
            vars.push_back(v.text);
        }
        ts.expect_symbol("]");
        for (const auto& v : vars)
            if (detail::tower_name(coeff, v)) throw SyntaxError(name.line, name.col, {"variable not naming a field generator"}, "'" + v + "'");
        pf_.rings[name.text] = {coeff, vars};
    }

    const RingDecl& ring_ref(TokenStream& ts, std::string& name) {
        Token t = ts.expect_name("ring name");
        auto it = pf_.rings.find(t.text);
        if (it == pf_.rings.end()) throw NameError(t.line, t.col, t.text, "undefined ring");
        name = t.text;
        return it->second;
    }

    void gens(TokenStream& ts) {
        Token kw = ts.next();
        Token name = new_name(ts);
        ts.expect_keyword("in");
        GensDecl g;
        g.line = kw.line;
        const RingDecl& r = ring_ref(ts, g.ring);
        g.over = Tower::rationals();
        if (ts.at_keyword("over")) {
            ts.next();
            g.over = field_ref(ts);
        }
        ts.expect_symbol("=");
        ts.expect_symbol("{");
        std::vector<Expr> exprs{parse_expression(ts)};
        while (ts.at_symbol(",")) {
            ts.next();
            exprs.push_back(parse_expression(ts));
        }
        ts.expect_symbol("}");
        const bool over_q = r.coeff->kind() == StepKind::Base;
        for (const auto& e : exprs) {
            if (r.vars.size() == 1) g.upoly.push_back(eval_kpoly(e, r.coeff, r.vars[0]));
            if (over_q) g.mpoly.push_back(eval_mpoly(e, r.vars));
            if (r.vars.size() > 1 && !over_q)
                throw Error(ErrorKind::UnsupportedTowerShape, "multivariate rings must have coefficients in Q");
        }
        pf_.gens[name.text] = std::move(g);
    }

    void derivation(TokenStream& ts) {
        Token kw = ts.next();
        Token name = new_name(ts);
        ts.expect_keyword("on");
        DerivationDecl d;
        d.line = kw.line;
        const RingDecl& r = ring_ref(ts, d.ring);
        if (r.coeff->kind() != StepKind::Base)
            throw Error(ErrorKind::UnsupportedTowerShape, "derivations are supported over Q only");
        ts.expect_symbol("=");
        ts.expect_symbol("{");
        if (!ts.at_symbol("}")) {
            while (true) {
                MPoly key = eval_mpoly(parse_expression(ts), r.vars);
                ts.expect_symbol("->");
                MPoly val = eval_mpoly(parse_expression(ts), r.vars);
                d.rules.emplace_back(std::move(key), std::move(val));
                if (!ts.at_symbol(",")) break;
                ts.next();
            }
        }
        ts.expect_symbol("}");
        pf_.derivations[name.text] = std::move(d);
    }

    void task(TokenStream& ts) {
        Token kw = ts.next();
        if (pf_.task)
            throw Error(ErrorKind::DuplicateTask, std::to_string(kw.line) + ":" + std::to_string(kw.col) + ": second task (first on line " +
                                                       std::to_string(pf_.task->line) + ")");
        TaskDecl t;
        t.line = kw.line;
        t.col = kw.col;
        Token kind = ts.peek();
        const auto& keys = task_keys();
        if (kind.kind != Tok::Name || !keys.count(kind.text)) {
            std::vector<std::string> exp;
            for (const auto& [k, v] : keys) exp.push_back("'" + k + "'");
            ts.fail(exp);
        }
        t.kind = ts.next().text;
        Token target = ts.expect_name("target name");
        const bool wants_derivation = t.kind == "lnd";
        if (wants_derivation ? !pf_.derivations.count(target.text) : !pf_.gens.count(target.text))
            throw NameError(target.line, target.col, target.text, wants_derivation ? "undefined derivation" : "undefined generator list");
        t.target = target.text;
        const auto& allowed = keys.at(t.kind);
        while (!ts.at_end()) {
            Token key = ts.peek();
            if (key.kind != Tok::Name || std::find(allowed.begin(), allowed.end(), key.text) == allowed.end()) {
                std::vector<std::string> exp;
                for (const auto& k : allowed) exp.push_back("'" + k + "'");
                exp.push_back("end of line");
                ts.fail(exp);
            }
            ts.next();
            if (t.options.count(key.text)) throw SyntaxError(key.line, key.col, {"option not given twice"}, "'" + key.text + "'");
            ts.expect_symbol("=");
            OptionValue v;
            v.token = ts.peek();
            if (v.token.kind == Tok::String) ts.next();
            else v.expr = parse_expression(ts);
            t.options[key.text] = std::move(v);
        }
        pf_.task = std::move(t);
    }

    ProblemFile& pf_;
};

}  // namespace detail

inline ProblemFile parse_problem(const std::string& text, const std::string& directory = ".") {
    ProblemFile pf;
    pf.directory = directory;
    pf.hash = fnv1a(text);
    detail::Parser p(pf);
    std::istringstream in(text);
    std::string line;
    int n = 0;
    while (std::getline(in, line)) {
        ++n;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        p.line(line, n);
    }
    p.finish(n + 1);
    return pf;
}

// ---------------------------------------------------------------------------
// Running

struct RunOptions {
    std::optional<int> bound, seed, retries;
};

struct RunReport {
    int exit_code = 0;
    Json json;
    std::string trace;
};

inline int exit_code_for(ErrorKind k) {
    switch (k) {
        case ErrorKind::ParseError:
        case ErrorKind::UndefinedName:
        case ErrorKind::DuplicateTask: return 2;
        case ErrorKind::VerificationFailed:
        case ErrorKind::TraceContradiction:
        case ErrorKind::InconsistentExtension:
        case ErrorKind::InconsistentSystem:
        case ErrorKind::RetriesExhausted:
        case ErrorKind::DegreeMismatch: return 1;
        default: return 3;
    }
}

namespace detail {

inline std::string hex64(std::uint64_t h) {
    static const char* d = "0123456789abcdef";
    std::string out(16, '0');
    for (int i = 15; i >= 0; --i, h >>= 4) out[static_cast<std::size_t>(i)] = d[h & 15];
    return out;
}

class Runner {
public:
    Runner(const ProblemFile& pf, const RunOptions& opts) : pf_(pf), opts_(opts), task_(*pf.task) {}

    RunReport run() {
        report_.json["schema"] = kSchemaVersion;
        report_.json["tool"] = std::string("polyembed ") + kToolVersion;
        report_.json["task"] = task_.kind;
        report_.json["input_hash"] = "fnv1a64:" + hex64(pf_.hash);
        if (task_.kind == "embed") embed();
        else if (task_.kind == "sagbi") sagbi();
        else if (task_.kind == "normalize") normalize();
        else if (task_.kind == "conductor") conductor_task();
        else if (task_.kind == "lnd") lnd();
        else if (task_.kind == "cancel") cancel();
        else if (task_.kind == "verify") verify();
        report_.json["status"] = report_.exit_code == 0 ? "verified" : "failed";
        trace("status: " + std::string(report_.exit_code == 0 ? "verified" : "failed"));
        return report_;
    }

private:
    void trace(const std::string& s) { report_.trace += s + "\n"; }

    int int_option(const std::string& key, std::optional<int> cli, int fallback) {
        if (cli) return *cli;
        auto it = task_.options.find(key);
        if (it == task_.options.end()) return fallback;
        const OptionValue& v = it->second;
        if (!v.expr || v.expr->op != Expr::Op::Num || v.expr->num.get_den() != 1 || !v.expr->num.get_num().fits_sint_p())
            throw SyntaxError(v.token.line, v.token.col, {"integer"}, v.token.describe());
        return static_cast<int>(v.expr->num.get_num().get_si());
    }

    const Expr* expr_option(const std::string& key) {
        auto it = task_.options.find(key);
        if (it == task_.options.end()) return nullptr;
        if (!it->second.expr) throw SyntaxError(it->second.token.line, it->second.token.col, {"expression"}, it->second.token.describe());
        return &*it->second.expr;
    }

    std::string name_option(const std::string& key) {
        const Expr* e = expr_option(key);
        if (!e) return "";
        if (e->op != Expr::Op::Name) throw SyntaxError(e->line, e->col, {"name"}, "expression");
        return e->name;
    }

    std::optional<std::string> string_option(const std::string& key) {
        auto it = task_.options.find(key);
        if (it == task_.options.end()) return std::nullopt;
        if (it->second.token.kind != Tok::String)
            throw SyntaxError(it->second.token.line, it->second.token.col, {"string"}, it->second.token.describe());
        return it->second.token.text;
    }

    Presentation presentation(const std::string& gname) {
        const GensDecl& g = pf_.gens.at(gname);
        const RingDecl& r = pf_.rings.at(g.ring);
        if (r.vars.size() != 1) throw Error(ErrorKind::UnsupportedTowerShape, "task " + task_.kind + " needs a univariate ring");
        Presentation p{r.coeff, g.over, g.upoly, r.vars[0]};
        p.validate();
        return p;
    }

    static std::string join(const std::vector<std::string>& v, const std::string& sep = ", ") {
        std::string out;
        for (std::size_t i = 0; i < v.size(); ++i) out += (i ? sep : "") + v[i];
        return out;
    }

    // -- embed ---------------------------------------------------------------

    void embed() {
        Presentation p = presentation(task_.target);
        EmbeddingProblem prob;
        prob.presentation = p;
        prob.bound = int_option("bound", opts_.bound, -1);
        prob.seed = static_cast<std::uint64_t>(int_option("seed", opts_.seed, 1));
        prob.retries = int_option("retries", opts_.retries, 8);
        const int bound = prob.bound >= 0 ? prob.bound : detail::default_bound(p, prob.graded);
        prob.bound = bound;
        report_.json["options"] = Json{{"bound", bound}, {"seed", prob.seed}, {"retries", prob.retries}};
        trace("task embed " + task_.target + " (bound " + std::to_string(bound) + ", seed " + std::to_string(prob.seed) + ")");
        std::vector<std::string> gs, lf;
        for (const auto& g : p.gens) {
            gs.push_back(g.to_string(p.var));
            lf.push_back(KPoly::monomial(g.lead(), g.degree()).to_string(p.var));
        }
        trace("generators: " + join(gs));
        trace("leading forms: " + join(lf));
        trace("K = " + p.ambient->describe() + ", k = " + p.coeff->describe());
        EmbeddingCertificate cert = construct_embedding(prob);
        Json cj = certificate_to_json(cert, p);
        for (auto it = cj.begin(); it != cj.end(); ++it) report_.json[it.key()] = it.value();
        for (const auto& r : cert.discovery)
            trace("coefficient discovery at " + std::to_string(r.bound) + ": trdeg " + std::to_string(r.trdeg) +
                  (r.sources.empty() ? "" : " via " + join(r.sources)));
        for (const auto& a : cert.rejected)
            trace("specialization u0 = " + a.u0 + " rejected: " + a.reason + (a.witness.empty() ? "" : " (killed element " + a.witness + ")"));
        trace(std::string("case: ") + to_string(cert.kind));
        if (cert.u0) trace("u0 = " + cert.u0->to_string());
        trace("d = " + std::to_string(cert.d) + ", t weight = " + std::to_string(cert.t_weight) + ", e = " + std::to_string(cert.e));
        trace("c = " + cert.c.to_string());
        for (const auto& a : cert.adjunctions) trace("adjoined " + a.name + " (" + a.kind + "): " + a.relation);
        trace("F = " + cert.field->describe());
        std::vector<std::string> ims;
        for (const auto& im : cert.images) ims.push_back(im.to_string(cert.t));
        trace("images: " + join(ims));
        trace_ranks(cert.verification);
        for (const auto& c : cert.verification.checks) trace("check " + c.name + ": " + (c.passed ? "ok" : "FAILED") + " (" + c.detail + ")");
        report_.exit_code = cert.verification.passed ? 0 : 1;
    }

    void trace_ranks(const VerificationReport& v) {
        std::string src, img;
        for (int x : v.ranks_source) src += " " + std::to_string(x);
        for (int x : v.ranks_image) img += " " + std::to_string(x);
        trace("ranks by degree (source):" + src);
        trace("ranks by degree (image): " + img);
    }

    // -- sagbi ---------------------------------------------------------------

    void sagbi() {
        Presentation p = presentation(task_.target);
        const int bound = int_option("bound", opts_.bound, detail::default_bound(p, {}));
        report_.json["options"] = Json{{"bound", bound}};
        trace("task sagbi " + task_.target + " (bound " + std::to_string(bound) + ")");
        GradedPiece g = filtration_basis(p, bound);
        NumericalSemigroup sg = make_semigroup(g.realized_degrees());
        report_.json["semigroup"] = Json{{"generators", sg.generators}, {"gcd", sg.d}, {"frobenius", sg.frobenius}, {"conductor", sg.conductor}};
        report_.json["realized_degrees"] = g.realized_degrees();
        report_.json["ranks"] = g.rank_by_nominal;
        SagbiResult s = sagbi_complete(p, bound);
        std::vector<std::string> added;
        for (std::size_t i = p.gens.size(); i < s.completed.gens.size(); ++i) added.push_back(s.completed.gens[i].to_string(p.var));
        report_.json["completion"] = Json{{"added", added}, {"bounded", s.bounded}, {"stable_last_two", s.stable_last_two}};
        std::string gens;
        for (int x : sg.generators) gens += (gens.empty() ? "" : ",") + std::to_string(x);
        trace("degree semigroup <" + gens + ">, gcd " + std::to_string(sg.d) + ", conductor " + std::to_string(sg.conductor));
        trace("completion added " + std::to_string(added.size()) + " generators" + (added.empty() ? "" : ": " + join(added)) +
              (s.stable_last_two ? "; stable in the last two degrees" : "; changed in the last two degrees"));
        bool ok = true;
        if (const Expr* m = expr_option("member")) {
            KPoly f = eval_kpoly(*m, p.ambient, p.var);
            const int fb = std::max(bound, f.degree());
            SubductionResult r = subduct(f, p, fb);
            std::vector<std::string> names;
            for (std::size_t i = 0; i < p.gens.size(); ++i) names.push_back("w" + std::to_string(i + 1));
            report_.json["subduction"] = Json{{"element", f.to_string(p.var)},
                                              {"member", r.member},
                                              {"remainder", r.remainder.to_string(p.var)},
                                              {"expression", expression_to_string(r.expression, names)},
                                              {"verified", r.verified}};
            trace("subduction of " + f.to_string(p.var) + ": " + (r.member ? "member" : "remainder " + r.remainder.to_string(p.var)) +
                  ", expression " + expression_to_string(r.expression, names));
            ok = r.verified;
        }
        report_.exit_code = ok ? 0 : 1;
    }

    // -- normalize / conductor -----------------------------------------------

    NormalizationResult normalization(const Presentation& p) {
        NormalizationResult n = normalize_curve(p);
        report_.json["normalization"] = normalization_to_json(n, p.var);
        std::vector<std::string> ex;
        for (const auto& e : n.expressions) ex.push_back(e.to_string("theta"));
        trace("Luroth generator: " + n.luroth.to_string(p.var));
        trace("O = k[theta], theta = " + n.theta.to_string(p.var) + " (degree " + std::to_string(n.e) + ")");
        trace("generators in theta: " + join(ex));
        return n;
    }

    bool recheck_normalization(const Presentation& p, const NormalizationResult& n) {
        bool ok = true;
        for (std::size_t i = 0; i < p.gens.size(); ++i) ok = ok && n.expressions[i].compose(n.theta) == p.gens[i];
        ok = ok && contains_all(Presentation{p.ambient, p.coeff, {n.theta}, p.var}, p.gens);
        return ok;
    }

    void normalize() {
        Presentation p = presentation(task_.target);
        trace("task normalize " + task_.target);
        NormalizationResult n = normalization(p);
        const bool ok = recheck_normalization(p, n);
        report_.json["checks"] = Json{{"expressions_compose", ok}};
        trace(std::string("recheck: ") + (ok ? "generators recomposed exactly" : "FAILED"));
        report_.exit_code = ok ? 0 : 1;
    }

    void conductor_task() {
        Presentation p = presentation(task_.target);
        const int bound = int_option("bound", opts_.bound, 20);
        const int ext_bound = int_option("ext_bound", std::nullopt, 10);
        report_.json["options"] = Json{{"bound", bound}, {"ext_bound", ext_bound}};
        trace("task conductor " + task_.target + " (bound " + std::to_string(bound) + ")");
        NormalizationResult n = normalization(p);
        ConductorResult c = conductor(n, bound);
        report_.json["conductor"] = conductor_to_json(c);
        bool ok = c.verified && recheck_normalization(p, n);
        if (c.exact) {
            trace("conductor = theta^" + std::to_string(c.exponent) + " k[theta] (exact)");
            PolynomialExtensionCheck chk = polynomial_extension_check(n, c.exponent, ext_bound);
            report_.json["polynomial_extension"] = Json{{"exponent", chk.exponent},
                                                        {"bound", chk.bound},
                                                        {"contains", chk.contains},
                                                        {"smaller_fails", chk.smaller_fails},
                                                        {"witness", chk.witness.empty() ? Json(nullptr) : Json(chk.witness)}};
            trace("R[x]: theta^" + std::to_string(c.exponent) + " k[theta][x] inside through bidegree " + std::to_string(ext_bound) + ": " +
                  (chk.contains ? "yes" : "no") + (chk.witness.empty() ? "" : "; smaller exponent fails at " + chk.witness));
            ok = ok && chk.contains && chk.smaller_fails;
        } else {
            trace("conductor generator through theta-degree " + std::to_string(bound) + ": " + (c.h ? c.h->to_string("theta") : "none found"));
        }
        report_.exit_code = ok ? 0 : 1;
    }

    // -- lnd -------------------------------------------------------------------

    PolyDerivation derivation(const std::string& name) {
        const DerivationDecl& d = pf_.derivations.at(name);
        const RingDecl& r = pf_.rings.at(d.ring);
        const int n = static_cast<int>(r.vars.size());
        PolyDerivation D{r.vars, std::vector<MPoly>(static_cast<std::size_t>(n), MPoly(n))};
        std::vector<bool> seen(static_cast<std::size_t>(n), false);
        for (const auto& [key, val] : d.rules) {
            int idx = -1;
            for (int i = 0; i < n; ++i)
                if (key == MPoly::variable(n, i)) idx = i;
            if (idx < 0) throw Error(ErrorKind::PreconditionFailed, "derivation " + name + ": keys must be ring variables");
            if (seen[static_cast<std::size_t>(idx)])
                throw Error(ErrorKind::PreconditionFailed, "derivation " + name + ": variable given twice");
            seen[static_cast<std::size_t>(idx)] = true;
            D.images[static_cast<std::size_t>(idx)] = val;
        }
        return D;
    }

    void lnd() {
        PolyDerivation D = derivation(task_.target);
        const RingDecl& r = pf_.rings.at(pf_.derivations.at(task_.target).ring);
        const int bound = int_option("bound", opts_.bound, D.default_bound());
        report_.json["options"] = Json{{"bound", bound}};
        report_.json["derivation"] = D.to_string();
        trace("task lnd " + task_.target + ": " + D.to_string());
        NilpotencyVerdict v = is_locally_nilpotent(D, bound);
        report_.json["nilpotency"] = nilpotency_to_json(v, D.names);
        std::string idx;
        for (std::size_t i = 0; i < D.names.size(); ++i)
            idx += (i ? ", " : "") + D.names[i] + ":" + (v.indices[i] < 0 ? "?" : std::to_string(v.indices[i]));
        trace(std::string("nilpotency: ") + to_string(v.verdict) + " (indices " + idx + ")" + (v.witness.empty() ? "" : ", witness " + v.witness));
        const Expr* s_expr = expr_option("slice");
        if (const Expr* b_expr = expr_option("expand")) {
            if (!s_expr) throw Error(ErrorKind::PreconditionFailed, "expand needs slice");
            MPoly s = eval_mpoly(*s_expr, r.vars), b = eval_mpoly(*b_expr, r.vars);
            SliceData sl = make_slice(D, s);
            auto coeffs = slice_expansion(D, sl, b, bound);
            Json cj = Json::array();
            for (std::size_t i = 0; i < coeffs.size(); ++i) cj.push_back(coeffs[i].to_string(D.names, sl.ds));
            report_.json["slice"] = Json{{"s", s.to_string(D.names)}, {"ds", sl.ds.to_string(D.names)}, {"element", b.to_string(D.names)}, {"coefficients", cj}};
            trace("slice s = " + s.to_string(D.names) + ", Ds = " + sl.ds.to_string(D.names));
            for (std::size_t i = 0; i < coeffs.size(); ++i) trace("  a" + std::to_string(i) + " = " + coeffs[i].to_string(D.names, sl.ds));
        }
        if (const Expr* r_expr = expr_option("r")) {
            if (!s_expr) throw Error(ErrorKind::PreconditionFailed, "r needs slice");
            const std::string closure = name_option("closure");
            if (closure.empty() || !pf_.gens.count(closure)) throw Error(ErrorKind::PreconditionFailed, "r needs closure=GENS");
            const GensDecl& g = pf_.gens.at(closure);
            if (g.ring != pf_.derivations.at(task_.target).ring)
                throw Error(ErrorKind::PreconditionFailed, "closure generators must live in the derivation's ring");
            MPoly s = eval_mpoly(*s_expr, r.vars), rr = eval_mpoly(*r_expr, r.vars);
            SlicePipelineResult res = slice_pipeline(D, s, rr, g.mpoly);
            Json exps = Json::array();
            for (const auto& ex : res.expansions) {
                Json one = Json::array();
                for (const auto& a : ex) one.push_back(a.to_string(D.names, D.apply(s)));
                exps.push_back(one);
            }
            Json pj;
            pj["statement"] = res.statement;
            pj["expansions"] = exps;
            pj["certificate"] = certificate_to_json(res.certificate, res.presentation);
            pj["normalization"] = res.normalization ? normalization_to_json(*res.normalization, s.to_string(D.names)) : Json(nullptr);
            report_.json["pipeline"] = pj;
            trace("pipeline: " + res.statement);
            if (!res.certificate.verification.passed) report_.exit_code = 1;
        }
    }

    // -- cancel ----------------------------------------------------------------

    void cancel() {
        const GensDecl& g = pf_.gens.at(task_.target);
        const RingDecl& rr = pf_.rings.at(g.ring);
        if (rr.vars.size() != 1 || rr.coeff->kind() != StepKind::Base)
            throw Error(ErrorKind::UnsupportedTowerShape, "cancel needs R inside Q[theta]");
        const std::string dname = name_option("derivation");
        if (dname.empty() || !pf_.derivations.count(dname)) throw Error(ErrorKind::PreconditionFailed, "cancel needs derivation=NAME");
        const DerivationDecl& dd = pf_.derivations.at(dname);
        const RingDecl& dr = pf_.rings.at(dd.ring);
        if (dr.vars.empty() || dr.vars[0] != rr.vars[0])
            throw Error(ErrorKind::PreconditionFailed, "the derivation's ring must start with " + rr.vars[0]);
        const int nv = static_cast<int>(dr.vars.size());
        CurveExtension ce;
        ce.n = nv - 1;
        for (const auto& w : g.upoly) ce.gens.push_back(detail::to_rational_poly(w));
        ce.gen_images.assign(ce.gens.size(), MPoly(nv));
        ce.var_images.assign(static_cast<std::size_t>(ce.n), MPoly(nv));
        for (const auto& [key, val] : dd.rules) {
            bool placed = false;
            for (std::size_t i = 0; i < ce.gens.size() && !placed; ++i)
                if (key == ce.gen(i)) {
                    ce.gen_images[i] = val;
                    placed = true;
                }
            for (int j = 1; j < nv && !placed; ++j)
                if (key == MPoly::variable(nv, j)) {
                    ce.var_images[static_cast<std::size_t>(j - 1)] = val;
                    placed = true;
                }
            if (!placed) throw Error(ErrorKind::PreconditionFailed, "derivation keys must be generators of R or adjoined variables");
        }
        // CurveExtension names theta and x...; keep the file's names in the report
        trace("task cancel " + task_.target + " with " + dname + ", n = " + std::to_string(ce.n));
        CancellationTrace tr = cancellation_trace(ce, int_option("bound", opts_.bound, -1));
        report_.json["n"] = ce.n;
        report_.json["trace"] = trace_to_json(tr);
        for (const auto& s : tr.steps) trace(s.name + ": " + s.statement + (s.verified ? "  [re-verified]" : "  [NOT verified]"));
        trace("verdict: " + tr.verdict);
        bool ok = true;
        for (const auto& s : tr.steps) ok = ok && s.verified;
        report_.exit_code = ok ? 0 : 1;
    }

    // -- verify ----------------------------------------------------------------

    void verify() {
        Presentation p = presentation(task_.target);
        auto path = string_option("certificate");
        if (!path) throw Error(ErrorKind::PreconditionFailed, "verify needs certificate=\"FILE\"");
        std::string full = (!path->empty() && (*path)[0] == '/') ? *path : pf_.directory + "/" + *path;
        std::ifstream in(full);
        if (!in) throw Error(ErrorKind::PreconditionFailed, "cannot read certificate " + *path);
        Json j;
        try {
            j = Json::parse(in);
        } catch (const nlohmann::json::exception& e) {
            throw Error(ErrorKind::VerificationFailed, std::string("certificate is not JSON: ") + e.what());
        }
        trace("task verify " + task_.target + " against " + *path);
        EmbeddingCertificate cert = certificate_from_json(j, p);
        EmbeddingProblem prob;
        prob.presentation = p;
        try {
            prob.bound = j.at("verification").at("bound").get<int>();
        } catch (const nlohmann::json::exception&) {
            prob.bound = -1;
        }
        VerificationReport rep = verify_certificate(prob, cert);
        report_.json["case"] = to_string(cert.kind);
        report_.json["verification"] = verification_to_json(rep);
        trace_ranks(rep);
        for (const auto& c : rep.checks) trace("check " + c.name + ": " + (c.passed ? "ok" : "FAILED") + " (" + c.detail + ")");
        report_.exit_code = rep.passed ? 0 : 1;
    }

    const ProblemFile& pf_;
    RunOptions opts_;
    const TaskDecl& task_;
    RunReport report_;
};

}  // namespace detail

inline RunReport run(const ProblemFile& pf, const RunOptions& opts = {}) { return detail::Runner(pf, opts).run(); }

/// Parses and runs; every failure becomes an exit code and a JSON error object.
inline RunReport execute(const std::string& text, const std::string& directory = ".", const RunOptions& opts = {}) {
    RunReport rep;
    std::string task = "unknown";
    auto fail = [&](const Error& e, Json extra) {
        rep.exit_code = exit_code_for(e.kind());
        Json j;
        j["schema"] = kSchemaVersion;
        j["tool"] = std::string("polyembed ") + kToolVersion;
        j["task"] = task;
        j["input_hash"] = "fnv1a64:" + detail::hex64(fnv1a(text));
        Json err;
        err["kind"] = to_string(e.kind());
        err["message"] = e.message();
        for (auto it = extra.begin(); it != extra.end(); ++it) err[it.key()] = it.value();
        j["error"] = err;
        j["status"] = "error";
        rep.json = j;
        rep.trace = std::string("error: ") + e.what() + "\n";
    };
    try {
        ProblemFile pf = parse_problem(text, directory);
        task = pf.task->kind;
        return run(pf, opts);
    } catch (const SyntaxError& e) {
        fail(e, Json{{"line", e.line()}, {"column", e.column()}, {"expected", e.expected()}, {"found", e.found()}});
    } catch (const NameError& e) {
        fail(e, Json{{"line", e.line()}, {"column", e.column()}, {"detail", e.brief()}});
    } catch (const WitnessError& e) {
        fail(e, Json{{"witness", e.witness()}});
    } catch (const Error& e) {
        fail(e, Json::object());
    }
    return rep;
}

/// Single-line diagnostic with the offending source line and a caret under the column.
inline std::string caret_diagnostic(const std::string& file, const std::string& text, int line, int column, const std::string& message) {
    std::istringstream in(text);
    std::string src;
    for (int i = 0; i < line && std::getline(in, src); ++i) {
    }
    std::string out = file + ":" + std::to_string(line) + ":" + std::to_string(column) + ": " + message + "\n";
    out += "  " + src + "\n  " + std::string(static_cast<std::size_t>(std::max(column - 1, 0)), ' ') + "^\n";
    return out;
}

}  // namespace polyembed

#endif  // POLYEMBED_PROBLEM_HPP
