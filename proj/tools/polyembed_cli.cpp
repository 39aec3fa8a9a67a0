// Copyright 2026 The polyembed Authors
// SPDX-License-Identifier: Apache-2.0

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "polyembed/problem.hpp"

int main(int argc, char** argv) {
    CLI::App app{"polyembed: certified embeddings of affine curve rings"};
    std::string input;
    bool json = false, trace = false;
    std::optional<int> bound, seed, retries;
    app.add_option("--input", input, "problem file")->required();
    auto* jflag = app.add_flag("--json", json, "emit the JSON report (default)");
    app.add_flag("--trace", trace, "emit a human-readable derivation narrative")->excludes(jflag);
    app.add_option("--bound", bound, "filtration bound N (overrides the file)")->check(CLI::NonNegativeNumber);
    app.add_option("--seed", seed, "seed for specialization points (default 1)")->check(CLI::NonNegativeNumber);
    app.add_option("--retries", retries, "specialization retry cap (default 8)")->check(CLI::PositiveNumber);
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 2;
    }

    std::ifstream in(input, std::ios::binary);
    if (!in) {
        std::cerr << input << ": cannot open\n";
        return 2;
    }
    std::stringstream buf;
    buf << in.rdbuf();
    const std::string text = buf.str();
    const std::string dir = std::filesystem::path(input).parent_path().string();

    polyembed::RunOptions opts;
    opts.bound = bound;
    opts.seed = seed;
    opts.retries = retries;
    polyembed::RunReport rep = polyembed::execute(text, dir.empty() ? "." : dir, opts);

    if (rep.json.contains("error") && rep.json["error"].contains("line")) {
        const auto& err = rep.json["error"];
        std::string msg = err["kind"].get<std::string>();
        if (err.contains("expected")) {
            std::string exp;
            for (const auto& x : err["expected"]) exp += (exp.empty() ? "" : ", ") + x.get<std::string>();
            msg += ": expected " + exp + ", found " + err["found"].get<std::string>();
        } else {
            msg += ": " + err.value("detail", err["message"].get<std::string>());
        }
        std::cerr << polyembed::caret_diagnostic(input, text, err["line"].get<int>(), err["column"].get<int>(), msg);
    } else if (rep.json.contains("error")) {
        const auto& err = rep.json["error"];
        std::cerr << input << ": " << err["kind"].get<std::string>() << ": " << err["message"].get<std::string>() << "\n";
    }
    if (trace) std::cout << rep.trace;
    else std::cout << rep.json.dump(2) << "\n";
    return rep.exit_code;
}
