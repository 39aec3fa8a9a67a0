// Copyright 2026 The polyembed Authors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <random>

#include "polyembed/problem.hpp"
#include "test_util.hpp"

using namespace polyembed;
using namespace testutil;

namespace {

const char* const kCusp =
    "# cusp\n"
    "ring B = Q[s]\n"
    "gens R in B = { s^2, s^3 }   # two generators\n"
    "task sagbi R bound=8 member=s^5\n";

std::vector<std::string> keys(const Json& j) {
    std::vector<std::string> out;
    for (auto it = j.begin(); it != j.end(); ++it) out.push_back(it.key());
    return out;
}

}  // namespace

TEST(Expr, PrecedenceAndSigns) {
    const KPoly f = eval_kpoly(parse_expression("2*s^2 + -3/2*s - (s - 1)^2"), q(), "s");
    EXPECT_EQ(f, poly(q(), {-1, make_rational(1, 2), 1}));
    EXPECT_EQ(eval_kpoly(parse_expression("-s^2"), q(), "s"), mono(q(), -1, 2));
    const FieldElement a = eval_field(parse_expression("a^-1"), sqrt2());
    EXPECT_EQ(a * sqrt2()->generator(), sqrt2()->one());
}

TEST(Expr, SyntaxErrorsCarryPosition) {
    try {
        parse_expression("s^2 + * s");
        FAIL();
    } catch (const SyntaxError& e) {
        EXPECT_EQ(e.line(), 1);
        EXPECT_EQ(e.column(), 7);
        EXPECT_EQ(e.kind(), ErrorKind::ParseError);
    }
    EXPECT_THROW(parse_expression("(s"), SyntaxError);
    EXPECT_THROW(parse_expression("s $ 2"), SyntaxError);
}

TEST(Problem, ParsesDeclarationsAndComments) {
    const ProblemFile pf = parse_problem(kCusp);
    ASSERT_TRUE(pf.task.has_value());
    EXPECT_EQ(pf.task->kind, "sagbi");
    EXPECT_EQ(pf.task->target, "R");
    EXPECT_EQ(pf.rings.count("B"), 1u);
    EXPECT_EQ(pf.gens.at("R").upoly.size(), 2u);
}

TEST(Problem, ReportHeaderIsStable) {
    const RunReport rep = execute(kCusp);
    EXPECT_EQ(rep.exit_code, 0);
    const auto k = keys(rep.json);
    ASSERT_GE(k.size(), 5u);
    EXPECT_EQ((std::vector<std::string>(k.begin(), k.begin() + 4)),
              (std::vector<std::string>{"schema", "tool", "task", "input_hash"}));
    EXPECT_EQ(k.back(), "status");
    EXPECT_EQ(rep.json["schema"], 1);
    EXPECT_EQ(rep.json["subduction"]["expression"], "w1*w2");
    EXPECT_EQ(execute(kCusp).json.dump(), rep.json.dump());
}

TEST(Problem, ExitCodes) {
    struct Case {
        const char* text;
        int code;
        const char* kind;
    };
    const Case cases[] = {
        {"ring B = Q[s]\ngens R in B = { }\ntask embed R\n", 2, "ParseError"},
        {"ring B = Q[s]\ngens R in B = { s^2 }\ntask embed R\ntask sagbi R\n", 2, "DuplicateTask"},
        {"ring B = Q[s]\ngens R in B = { b*s^2 }\ntask embed R\n", 2, "UndefinedName"},
        {"ring B = Q[s]\ngens R in B = { s^2 }\n", 2, "ParseError"},
        {"field K = Q(u, v)\nring B = K[s]\ngens R in B = { u*s }\ntask embed R\n", 3, "UnsupportedTowerShape"},
        {"extend K = Q adjoin a minpoly a^2 - 4\nring B = K[s]\ngens R in B = { s }\ntask embed R\n", 3,
         "ReducibleMinimalPolynomial"},
    };
    for (const auto& c : cases) {
        const RunReport rep = execute(c.text);
        EXPECT_EQ(rep.exit_code, c.code) << c.text;
        EXPECT_EQ(rep.json["error"]["kind"], c.kind) << c.text;
        EXPECT_EQ(rep.json["status"], "error");
    }
}

TEST(Problem, ErrorPositions) {
    const RunReport rep = execute("ring B = Q[s]\ngens R in B = { s^2, b*s^3 }\ntask embed R\n");
    EXPECT_EQ(rep.json["error"]["line"], 2);
    EXPECT_EQ(rep.json["error"]["column"], 22);
    const std::string diag = caret_diagnostic("f.pe", "ring B = Q[s]\ngens R in B = { s^2, b*s^3 }\n", 2, 22, "undefined name 'b'");
    EXPECT_NE(diag.find("f.pe:2:22: undefined name 'b'"), std::string::npos) << diag;
    EXPECT_NE(diag.find("\n" + std::string(23, ' ') + "^\n"), std::string::npos) << diag;
}

TEST(Problem, CertificateRoundTrip) {
    const TowerPtr K = sqrt2();
    const FieldElement a = K->generator();
    EmbeddingProblem prob;
    prob.presentation = Presentation{K, q(), {mono(K, a, 2), mono(K, a, 3)}, "s"};
    prob.bound = 10;
    const EmbeddingCertificate cert = construct_embedding(prob);
    const Json j = certificate_to_json(cert, prob.presentation);
    const EmbeddingCertificate back = certificate_from_json(Json::parse(j.dump()), prob.presentation);
    ASSERT_EQ(back.images.size(), 2u);
    EXPECT_EQ(back.images[1].to_string("t"), cert.images[1].to_string("t"));
    EXPECT_TRUE(verify_certificate(prob, back).passed);
    EXPECT_EQ(certificate_to_json(back, prob.presentation)["images"], j["images"]);

    Json bad = j;
    bad["images"][1] = "t^2";
    EXPECT_FALSE(verify_certificate(prob, certificate_from_json(bad, prob.presentation)).passed);
    bad["images"][1] = "t^";
    try {
        certificate_from_json(bad, prob.presentation);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::VerificationFailed);
    }
}

TEST(Problem, FuzzedInputsNeverEscape) {
    const std::vector<std::string> seeds{
        kCusp,
        "extend K = Q adjoin a minpoly a^2 - 2\nring B = K[s]\ngens R in B = { a*s^2, a*s^3 }\ntask embed R\n",
        "ring B = Q[x, y]\nderivation D on B = { x -> 0, y -> x }\ntask lnd D bound=3 slice=y expand=x*y + y\n",
        "ring O = Q[theta]\ngens R in O = { theta^2, theta^3 }\nring C = Q[theta, x]\n"
        "derivation D on C = { x -> 1 }\ntask cancel R derivation=D\n",
    };
    const std::string alphabet = "QKBRDsxyuav(){}[]<>=,+-*/^# \n\"->taskringgens";
    std::mt19937_64 rng(99);
    int runs = 0;
    for (int trial = 0; trial < 400; ++trial) {
        std::string text = seeds[static_cast<std::size_t>(trial) % seeds.size()];
        const int edits = std::uniform_int_distribution<int>(1, 4)(rng);
        for (int e = 0; e < edits && !text.empty(); ++e) {
            const std::size_t pos = std::uniform_int_distribution<std::size_t>(0, text.size() - 1)(rng);
            const char c = alphabet[std::uniform_int_distribution<std::size_t>(0, alphabet.size() - 1)(rng)];
            switch (std::uniform_int_distribution<int>(0, 2)(rng)) {
                case 0: text.erase(pos, 1); break;
                case 1: text.insert(pos, 1, c); break;
                default: text[pos] = c; break;
            }
        }
        RunReport rep;
        ASSERT_NO_THROW(rep = execute(text)) << text;
        EXPECT_TRUE(rep.exit_code >= 0 && rep.exit_code <= 3) << text;
        EXPECT_EQ(rep.json["schema"], 1);
        if (rep.exit_code == 2) EXPECT_TRUE(rep.json.contains("error")) << text;
        ++runs;
    }
    EXPECT_EQ(runs, 400);

    std::uniform_int_distribution<int> printable(9, 126);
    for (int trial = 0; trial < 200; ++trial) {
        std::string text;
        for (int i = 0; i < 40; ++i) text.push_back(static_cast<char>(printable(rng)));
        RunReport rep;
        ASSERT_NO_THROW(rep = execute(text));
        EXPECT_EQ(rep.exit_code, 2) << text;
    }
}
