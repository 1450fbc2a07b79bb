#pragma once

// Subcommand driver. Reports go to `out`, diagnostics to `err`.
// Exit status: 0 success, 2 validation failure (report still written),
// 1 usage, I/O or parse error.

#include "azumaya/io/report.hpp"

#include "CLI11.hpp"

#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

namespace azumaya {

struct CommandSpec {
    std::vector<std::string> command;  // e.g. {"morphism", "analyze"}
    std::string input = "-";
    std::string compare;               // d0 iso: optional second document
    std::string output = "-";
    std::string svg_out;
    std::string samples;
    std::optional<long> m_max, m0;
    std::uint64_t seed = 0;
    unsigned threads = 0;              // 0: hardware concurrency
};

namespace detail {

struct CliFailure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline std::string read_input(const std::string& path, std::istream& in) {
    std::ostringstream os;
    if (path == "-") {
        os << in.rdbuf();
        return os.str();
    }
    std::ifstream f(path);
    if (!f) throw CliFailure("cannot read " + path);
    os << f.rdbuf();
    return os.str();
}

inline Document load(const std::string& path, std::istream& in, const std::string& kind) {
    Document d = parse_document(read_input(path, in));
    if (d.kind != kind) throw DocumentError("/kind", "expected a " + kind + " document, found " + d.kind);
    return d;
}

inline std::vector<Rat> parse_samples(const std::string& list) {
    std::vector<Rat> out;
    std::stringstream ss(list);
    std::string item;
    while (std::getline(ss, item, ',')) {
        auto b = item.find_first_not_of(' '), e = item.find_last_not_of(' ');
        if (b == std::string::npos) throw CliFailure("--samples: empty entry");
        try {
            out.push_back(parse_ratfunc(item.substr(b, e - b + 1), {}).constant());
        } catch (const std::exception& ex) {
            throw CliFailure("--samples: " + std::string(ex.what()));
        }
    }
    if (out.empty()) throw CliFailure("--samples: no values");
    return out;
}

inline Json envelope(const CommandSpec& spec) {
    std::string name;
    for (const auto& c : spec.command) name += (name.empty() ? "" : " ") + c;
    Json j;
    j["schema"] = schema_version;
    j["command"] = name;
    j["seed"] = spec.seed;
    return j;
}

/// Fibers at every pole and node place of each component.
inline Json analysis_fibers(const AzMorphism& phi, const MorphismValidation& v) {
    Json out = Json::array();
    for (std::size_t c = 0; c < phi.curve.size(); ++c) {
        std::vector<Place> places = v.poles[c];
        for (const auto& p : phi.curve.node_places(c)) add_place(places, p);
        std::sort(places.begin(), places.end());
        for (const auto& p : places) {
            try {
                out.push_back(report::fiber(fiber_at(phi, c, p), phi.curve));
            } catch (const std::exception& e) {
                out.push_back({{"component", phi.curve.components()[c].label}, {"place", place_text(p)}, {"error", e.what()}});
            }
        }
    }
    return out;
}

inline int d0_classify_cmd(const CommandSpec& spec, std::istream& in, Json& rep) {
    auto doc = load(spec.input, in, "d0");
    auto v = d0_validate(*doc.d0);
    rep["validation"] = report::d0_validation(v);
    if (!v.valid) return 2;
    rep["support"] = report::support(d0_support(*doc.d0));
    rep["flags"] = report::d0_classification(d0_classify(*doc.d0, spec.seed));
    return 0;
}

inline int d0_iso_cmd(const CommandSpec& spec, std::istream& in, Json& rep) {
    auto doc = load(spec.input, in, "d0");
    DZeroPoint b;
    if (!spec.compare.empty()) {
        std::istringstream none;
        b = *load(spec.compare, none, "d0").d0;
    } else if (doc.compare) {
        b = *doc.compare;
    } else {
        throw CliFailure("d0 iso needs a second document or a \"compare\" field");
    }
    auto va = d0_validate(*doc.d0), vb = d0_validate(b);
    rep["validation"] = {{"a", report::d0_validation(va)}, {"b", report::d0_validation(vb)}};
    if (!va.valid || !vb.valid) return 2;
    try {
        rep["result"] = report::d0_iso(d0_iso(*doc.d0, b, spec.seed));
    } catch (const std::invalid_argument& e) {
        rep["result"] = {{"isomorphic", false}, {"certified", true}, {"reason", e.what()}, {"witness", nullptr}};
    }
    return 0;
}

inline int morphism_validate_cmd(const CommandSpec& spec, std::istream& in, Json& rep) {
    auto doc = load(spec.input, in, "morphism");
    auto v = morphism_validate(*doc.morphism);
    rep["validation"] = report::validation(v, *doc.curve);
    return v.valid ? 0 : 2;
}

inline int morphism_analyze_cmd(const CommandSpec& spec, std::istream& in, Json& rep) {
    auto doc = load(spec.input, in, "morphism");
    const auto& phi = *doc.morphism;
    auto v = morphism_validate(phi);
    rep["validation"] = report::validation(v, phi.curve);
    if (!v.valid) return 2;
    rep["fibers"] = analysis_fibers(phi, v);
    auto model = branch_model(phi);
    rep["branch_model"] = report::branches(model, phi.curve);
    auto ct = comb_type(phi, model);
    rep["comb_type"] = report::comb_type(ct);
    rep["polarization"] = detail::emit_polarization(phi.curve, *doc.polarization);
    rep["hilbert"] = report::hilbert(hilbert_poly(ct, *doc.polarization));
    rep["surrogate"] = report::surrogate(surrogate_summary(phi, spec.seed), phi.curve);
    return 0;
}

inline int morphism_bounds_cmd(const CommandSpec& spec, std::istream& in, Json& rep) {
    if (!spec.m0 || !spec.m_max) throw CliFailure("morphism bounds needs --m0 and --mmax");
    if (*spec.m_max < 1 || *spec.m0 < 1) throw CliFailure("--m0 and --mmax must be >= 1");
    auto doc = load(spec.input, in, "morphism");
    const auto& phi = *doc.morphism;
    auto v = morphism_validate(phi);
    rep["validation"] = report::validation(v, phi.curve);
    if (!v.valid) return 2;
    auto model = branch_model(phi);
    try {
        auto b = support_bounds_check(phi, model, *doc.polarization, *spec.m_max, *spec.m0);
        rep["bounds"] = report::bounds(b, phi.curve);
        return b.inequalities_hold && b.genus_in_interval && b.alpha_in_range ? 0 : 2;
    } catch (const std::domain_error& e) {
        rep["bounds"] = {{"supported", false}, {"reason", e.what()}};
        return 2;
    }
}

inline int presentation_check_cmd(const CommandSpec& spec, std::istream& in, Json& rep) {
    Document doc = parse_document(read_input(spec.input, in));
    bool ok = true;
    if (doc.kind == "presentation") {
        const auto& p = *doc.presentation;
        auto adm = check_admissible(p.e, p.curve, p.r);
        rep["admissible"] = report::admissibility(adm, p.curve);
        auto atlas = check_atlas_conditions(p);
        rep["atlas"] = report::atlas(atlas);
        return adm.admissible && atlas.pass() ? 0 : 2;
    }
    if (doc.kind != "morphism") throw DocumentError("/kind", "expected a presentation or morphism document");
    const auto& phi = *doc.morphism;
    auto v = morphism_validate(phi);
    rep["validation"] = report::validation(v, phi.curve);
    if (!v.valid) return 2;
    auto model = branch_model(phi);
    if (auto p = embed_presentation(phi)) {
        auto atlas = check_atlas_conditions(*p);
        rep["atlas"] = report::atlas(atlas);
        ok = atlas.pass();
    } else {
        rep["atlas"] = {{"verdict", "not embeddable"}, {"reason", "some m_j is not generically invertible"}};
    }
    auto nd = check_nondegenerate(phi, model);
    rep["nondegenerate"] = report::nondegeneracy(nd);
    rep["strongly_nondegenerate"] = report::strong(check_strongly_nondegenerate(phi, model));
    return ok ? 0 : 2;
}

inline int spectral_cmd(const CommandSpec& spec, std::istream& in, Json& rep) {
    auto doc = load(spec.input, in, "morphism");
    const auto& phi = *doc.morphism;
    Json curves = Json::array();
    for (std::size_t c = 0; c < phi.curve.size(); ++c)
        for (std::size_t j = 0; j < phi.k; ++j) {
            Json e = report::spectral(spectral_curve(phi.tuples[c][j]));
            Json head = {{"component", phi.curve.components()[c].label}, {"matrix", "m_" + std::to_string(j + 1)}};
            head.update(e);
            curves.push_back(head);
        }
    rep["spectral_curves"] = curves;
    return 0;
}

inline int family_scan_cmd(const CommandSpec& spec, std::istream& in, Json& rep, std::ostream& err) {
    auto doc = load(spec.input, in, "family");
    const auto& fam = *doc.family;
    std::vector<Rat> samples = spec.samples.empty() ? fam.samples : parse_samples(spec.samples);
    if (samples.empty()) throw CliFailure("family scan needs --samples");
    unsigned threads = spec.threads ? spec.threads : std::max(1u, std::thread::hardware_concurrency());
    auto scan = family_scan(fam.sample_all(samples), default_grid(), threads);
    rep["scan"] = report::family(scan, fam.curve);
    if (!spec.svg_out.empty()) {
        std::ofstream f(spec.svg_out, std::ios::binary);
        if (!f) throw CliFailure("cannot write " + spec.svg_out);
        f << emit_svg_scan(scan);
        if (!f) throw CliFailure("cannot write " + spec.svg_out);
    }
    bool any = false;
    for (const auto& s : scan.samples) any = any || s.type.has_value();
    if (!any) err << "no sample produced a combinatorial type\n";
    return any ? 0 : 2;
}

}  // namespace detail

inline int run_command(const CommandSpec& spec, std::istream& in, std::ostream& out, std::ostream& err) {
    Json rep = detail::envelope(spec);
    int status = 1;
    try {
        const auto& c = spec.command;
        auto is = [&](const char* a, const char* b) { return c.size() == 2 && c[0] == a && c[1] == b; };
        if (is("d0", "classify")) status = detail::d0_classify_cmd(spec, in, rep);
        else if (is("d0", "iso")) status = detail::d0_iso_cmd(spec, in, rep);
        else if (is("morphism", "validate")) status = detail::morphism_validate_cmd(spec, in, rep);
        else if (is("morphism", "analyze")) status = detail::morphism_analyze_cmd(spec, in, rep);
        else if (is("morphism", "bounds")) status = detail::morphism_bounds_cmd(spec, in, rep);
        else if (is("presentation", "check")) status = detail::presentation_check_cmd(spec, in, rep);
        else if (c.size() == 1 && c[0] == "spectral") status = detail::spectral_cmd(spec, in, rep);
        else if (is("family", "scan")) status = detail::family_scan_cmd(spec, in, rep, err);
        else throw detail::CliFailure("unknown command");
    } catch (const ValidationError& e) {
        // Malformed input: the document cannot be interpreted at all.
        err << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
    std::string text = dump_json(rep);
    if (spec.output == "-") {
        out << text;
    } else {
        std::ofstream f(spec.output, std::ios::binary);
        if (!f || !(f << text)) {
            err << "error: cannot write " << spec.output << "\n";
            return 1;
        }
    }
    if (status == 2) err << "validation failed\n";
    return status;
}

/// Parses argv-style arguments (without the program name) and runs.
inline int run_command(std::vector<std::string> args, std::istream& in, std::ostream& out, std::ostream& err) {
    CLI::App app{"Exact analysis of commuting matrix tuples over Q(t)", "azumaya"};
    app.require_subcommand(1);
    CommandSpec spec;
    long m_max = 0, m0 = 0;
    auto io = [&](CLI::App* sub) {
        sub->add_option("input", spec.input, "input document (default: stdin)");
        sub->add_option("-o,--output", spec.output, "report path (default: stdout)");
        sub->add_option("--seed", spec.seed, "seed for randomized steps")->capture_default_str();
    };
    auto* d0 = app.add_subcommand("d0", "D0-brane points")->require_subcommand(1);
    auto* d0c = d0->add_subcommand("classify", "support and chow/hilb/singleton flags");
    io(d0c);
    auto* d0i = d0->add_subcommand("iso", "simultaneous-conjugation test");
    io(d0i);
    d0i->add_option("compare", spec.compare, "second document (default: the \"compare\" field)");
    auto* mor = app.add_subcommand("morphism", "morphisms from Azumaya curves")->require_subcommand(1);
    auto* mv = mor->add_subcommand("validate", "commutation, properness and node checks");
    io(mv);
    auto* ma = mor->add_subcommand("analyze", "fibers, branches, type, Hilbert polynomial, surrogate");
    io(ma);
    auto* mb = mor->add_subcommand("bounds", "support Hilbert polynomial and genus bounds");
    io(mb);
    auto* m0_opt = mb->add_option("--m0", m0, "m0 for the genus interval")->required();
    auto* mmax_opt = mb->add_option("--mmax", m_max, "largest m checked")->required();
    auto* pres = app.add_subcommand("presentation", "chart presentations")->require_subcommand(1);
    auto* pc = pres->add_subcommand("check", "admissibility, gluing conditions, nondegeneracy");
    io(pc);
    auto* sp = app.add_subcommand("spectral", "spectral curves of each m_j");
    io(sp);
    auto* fam = app.add_subcommand("family", "one-parameter families")->require_subcommand(1);
    auto* fs = fam->add_subcommand("scan", "combinatorial type per sample and support trajectories");
    io(fs);
    fs->add_option("--samples", spec.samples, "comma-separated rational values of s");
    fs->add_option("--svg-out", spec.svg_out, "write the trajectory plot here");
    fs->add_option("--threads", spec.threads, "worker threads (0: all cores)")->capture_default_str();

    std::reverse(args.begin(), args.end());
    try {
        app.parse(args);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
    for (auto* parent : app.get_subcommands()) {
        spec.command.push_back(parent->get_name());
        for (auto* child : parent->get_subcommands()) spec.command.push_back(child->get_name());
    }
    if (m0_opt->count()) spec.m0 = m0;
    if (mmax_opt->count()) spec.m_max = m_max;
    return run_command(spec, in, out, err);
}

}  // namespace azumaya
