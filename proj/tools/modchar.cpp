// ============================================================================
// modchar — command line front end
// ============================================================================
//
// Subcommands wire the library operations into reproducible experiments:
// formulas are read in the grammar below, models as JSON files.
//
//   formula := disj ; disj := conj ("|" conj)* ; conj := unary ("&" unary)* ;
//   unary := "<>" unary | "[]" unary | "~" unary | atom | "true" | "false"
//          | "(" formula ")"
//
// Exit codes: 0 success / pass, 1 verification failure, 2 bound abort,
// 64 usage error, 65 parse error.
//
// ============================================================================

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "modchar/characterize.hpp"
#include "modchar/oracle.hpp"
#include "modchar/simulation.hpp"

namespace {

constexpr int kExitPass = 0;
constexpr int kExitFail = 1;
constexpr int kExitBound = 2;
constexpr int kExitUsage = 64;
constexpr int kExitParse = 65;

using namespace modchar;

struct Options {
    std::vector<std::string> props;
    std::uint64_t seed = 0;
    int jobs = 1;
    std::string format = "text";
};

PropSignature signature_of(const Options& opt) {
    if (opt.props.empty())
        throw CLI::ValidationError("--props", "an explicit signature is required");
    return PropSignature{opt.props};
}

Formula read_formula(const std::string& text, const PropSignature& sig) {
    return parse_formula(text, sig);
}

void print_report(const VerificationReport& report, const Options& opt) {
    if (opt.format == "json") std::cout << report.to_json() << '\n';
    else std::cout << report.to_text();
}

int report_exit(const VerificationReport& report) {
    return report.pass ? kExitPass : kExitFail;
}

void write_example_dir(const Characterization& c, const std::string& dir, bool dot) {
    namespace fs = std::filesystem;
    fs::create_directories(fs::path(dir) / "pos");
    fs::create_directories(fs::path(dir) / "neg");
    std::ofstream formula_file(fs::path(dir) / "formula.txt");
    formula_file << to_string(c.formula) << '\n';

    auto write_side = [&](const std::vector<PointedModel>& models, const std::string& side) {
        int total_states = 0;
        for (std::size_t i = 0; i < models.size(); ++i) {
            std::ostringstream name;
            name << std::setw(3) << std::setfill('0') << i;
            fs::path base = fs::path(dir) / side / name.str();
            save_model(models[i], (base.string() + ".json"));
            if (dot) {
                std::ofstream out(base.string() + ".dot");
                out << to_dot(models[i]);
            }
            total_states += models[i].num_states();
        }
        return total_states;
    };
    int pos_states = write_side(c.positives, "pos");
    int neg_states = write_side(c.negatives, "neg");

    std::ofstream summary(fs::path(dir) / "summary.txt");
    summary << "formula: " << to_string(c.formula) << '\n'
            << "modal depth: " << modal_depth(c.formula) << '\n'
            << "positive examples: " << c.positives.size() << " (" << pos_states
            << " states)\n"
            << "negative examples: " << c.negatives.size() << " (" << neg_states
            << " states)\n";
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{
        "Finite characterisations of modal formulas in the Box/Dia/And/Or fragment:\n"
        "example construction, weak simulations, Fine normal forms and the\n"
        "verification oracles that check them."};
    app.require_subcommand(1);

    Options opt;
    app.add_option("--props", opt.props, "proposition signature, e.g. --props p,q")
        ->delimiter(',');
    app.add_option("--seed", opt.seed, "seed for randomized verification (default 0)");
    app.add_option("--jobs", opt.jobs, "concurrency budget for verifier scans (default 1)");
    app.add_option("--format", opt.format, "report format: text or json")
        ->check(CLI::IsMember({"text", "json"}));

    std::string formula_text, model_path, model_path_b, out_dir;
    int depth_n = 1;
    bool want_witness = false, want_dot = false;

    // parse: grammar check and negation normal form.
    auto* cmd_parse = app.add_subcommand("parse", "parse a formula and print its negation normal form");
    cmd_parse->add_option("formula", formula_text)->required();
    cmd_parse->callback([&] {
        std::cout << to_string(read_formula(formula_text, signature_of(opt))) << '\n';
    });

    // nf: Fine normal form, one disjunct per line.
    auto* cmd_nf = app.add_subcommand("nf", "rewrite into Fine normal form (one disjunct per line)");
    cmd_nf->add_option("formula", formula_text)->required();
    cmd_nf->callback([&] {
        PropSignature sig = signature_of(opt);
        NormalForm nf = to_normal_form(read_formula(formula_text, sig));
        for (const auto& b : nf.disjuncts) std::cout << to_string(bnf_to_formula(b)) << '\n';
    });

    // modelcheck: Kripke truth at the distinguished state.
    auto* cmd_mc = app.add_subcommand("modelcheck", "evaluate a formula at a model's point");
    cmd_mc->add_option("formula", formula_text)->required();
    cmd_mc->add_option("model", model_path)->required()->check(CLI::ExistingFile);
    cmd_mc->callback([&] {
        PointedModel m = load_model(model_path);
        std::cout << (modelcheck(read_formula(formula_text, m.signature()), m) ? "true"
                                                                               : "false")
                  << '\n';
    });

    // height: longest path from the point, or infinity.
    auto* cmd_height = app.add_subcommand("height", "height of a pointed model");
    cmd_height->add_option("model", model_path)->required()->check(CLI::ExistingFile);
    cmd_height->callback(
        [&] { std::cout << height(load_model(model_path)).to_string() << '\n'; });

    // unravel: depth-n tree unravelling.
    auto* cmd_unravel = app.add_subcommand("unravel", "depth-n tree unravelling of a model");
    cmd_unravel->add_option("model", model_path)->required()->check(CLI::ExistingFile);
    cmd_unravel->add_option("-n,--depth", depth_n, "unravelling depth")->required();
    cmd_unravel->add_option("-o,--out", out_dir, "output file (default stdout)");
    cmd_unravel->callback([&] {
        PointedModel u = tree_unravel(load_model(model_path), depth_n);
        if (out_dir.empty()) std::cout << to_json(u) << '\n';
        else save_model(u, out_dir);
    });

    // bisim: bisimilarity with optional greatest-bisimulation witness.
    auto* cmd_bisim = app.add_subcommand("bisim", "decide bisimilarity of two pointed models");
    cmd_bisim->add_option("left", model_path)->required()->check(CLI::ExistingFile);
    cmd_bisim->add_option("right", model_path_b)->required()->check(CLI::ExistingFile);
    cmd_bisim->add_flag("--witness", want_witness, "print the witness relation");
    cmd_bisim->callback([&] {
        auto w = bisimulation_witness(load_model(model_path), load_model(model_path_b));
        std::cout << (w ? "true" : "false") << '\n';
        if (want_witness) {
            if (w) std::cout << w->pairs_to_json() << '\n';
            else std::cout << "none\n";
        }
    });

    // wsim: weak simulation from the left model into the right one.
    auto* cmd_wsim =
        app.add_subcommand("wsim", "decide whether the right model weakly simulates the left");
    cmd_wsim->add_option("left", model_path)->required()->check(CLI::ExistingFile);
    cmd_wsim->add_option("right", model_path_b)->required()->check(CLI::ExistingFile);
    cmd_wsim->add_flag("--witness", want_witness, "print the witness relation");
    cmd_wsim->callback([&] {
        auto w = weak_simulation_witness(load_model(model_path), load_model(model_path_b));
        std::cout << (w ? "true" : "false") << '\n';
        if (want_witness) {
            if (w) std::cout << w->pairs_to_json() << '\n';
            else std::cout << "none\n";
        }
    });

    // characterize: build the uniquely characterising example pair.
    auto* cmd_char = app.add_subcommand(
        "characterize", "build the positive/negative example pair characterising a formula");
    cmd_char->add_option("formula", formula_text)->required();
    cmd_char->add_option("--out", out_dir, "output directory")->required();
    cmd_char->add_flag("--dot", want_dot, "also write Graphviz files");
    cmd_char->callback([&] {
        PropSignature sig = signature_of(opt);
        Formula f = read_formula(formula_text, sig);
        Characterization c{f, {}, {}};
        if (f.kind() == Formula::Kind::Top) {
            c.positives = {extend_top_bot(sig).top_positive};
        } else if (f.kind() == Formula::Kind::Bot) {
            c.negatives = {extend_top_bot(sig).bot_negative};
        } else {
            c = characterize(f, sig);
        }
        write_example_dir(c, out_dir, want_dot);
        std::cout << "wrote " << c.positives.size() << " positive and " << c.negatives.size()
                  << " negative examples to " << out_dir << '\n';
    });

    // characterize-uniform: the reduction for uniformly negated variables.
    std::vector<std::string> pos_props, neg_props;
    auto* cmd_uni = app.add_subcommand(
        "characterize-uniform",
        "characterise a uniform formula (negation only on the --neg-props variables)");
    cmd_uni->add_option("formula", formula_text)->required();
    cmd_uni->add_option("--pos-props", pos_props, "positively used variables")->delimiter(',');
    cmd_uni->add_option("--neg-props", neg_props, "negatively used variables")
        ->delimiter(',')
        ->required();
    cmd_uni->add_option("--out", out_dir, "output directory")->required();
    cmd_uni->add_flag("--dot", want_dot, "also write Graphviz files");
    cmd_uni->callback([&] {
        PropSignature sig = PropSignature::with_partition(pos_props, neg_props);
        Formula f = read_formula(formula_text, sig);
        Characterization c = characterize_uniform(f, pos_props, neg_props);
        write_example_dir(c, out_dir, want_dot);
        std::cout << "wrote " << c.positives.size() << " positive and " << c.negatives.size()
                  << " negative examples to " << out_dir << '\n';
    });

    // fits: check a formula against labeled example files.
    std::vector<std::string> pos_files, neg_files;
    auto* cmd_fits = app.add_subcommand("fits", "check a formula against labeled example files");
    cmd_fits->add_option("formula", formula_text)->required();
    cmd_fits->add_option("--pos", pos_files, "positive example files")->check(CLI::ExistingFile);
    cmd_fits->add_option("--neg", neg_files, "negative example files")->check(CLI::ExistingFile);
    cmd_fits->callback([&] {
        PropSignature sig = signature_of(opt);
        Formula f = read_formula(formula_text, sig);
        std::vector<PointedModel> pos, neg;
        for (const auto& p : pos_files) pos.push_back(load_model(p));
        for (const auto& p : neg_files) neg.push_back(load_model(p));
        FitResult r = fits(f, pos, neg);
        if (r.ok) {
            std::cout << "fits\n";
        } else {
            std::cout << "does not fit: "
                      << (r.counterexample_positive ? "positive" : "negative")
                      << " example refused, point " << r.counterexample->point_name() << '\n';
            std::exit(kExitFail);
        }
    });

    // verify: the oracle suites.
    auto* cmd_verify = app.add_subcommand("verify", "run a verification oracle");
    cmd_verify->require_subcommand(1);

    int vu_depth = 2;
    std::size_t vu_size = 7;
    bool vu_uniform = false;
    auto* cmd_vu = cmd_verify->add_subcommand(
        "unique", "check that every bounded fragment formula fitting the examples is equivalent");
    cmd_vu->add_option("formula", formula_text)->required();
    cmd_vu->add_option("--max-depth", vu_depth, "candidate depth bound (default 2)");
    cmd_vu->add_option("--max-size", vu_size, "candidate size bound (default 7)");
    cmd_vu->add_option("--pos-props", pos_props, "uniform mode: positive variables")
        ->delimiter(',');
    cmd_vu->add_option("--neg-props", neg_props, "uniform mode: negated variables")
        ->delimiter(',');
    cmd_vu->add_flag("--uniform", vu_uniform, "candidates from the uniform fragment");
    cmd_vu->callback([&] {
        UniqueBounds bounds;
        bounds.max_depth = vu_depth;
        bounds.max_size = vu_size;
        Characterization c{Formula::top(), {}, {}};
        if (vu_uniform) {
            PropSignature sig = PropSignature::with_partition(pos_props, neg_props);
            Formula f = read_formula(formula_text, sig);
            c = characterize_uniform(f, pos_props, neg_props);
            bounds.fragment.uniform = {{pos_props, neg_props}};
        } else {
            PropSignature sig = signature_of(opt);
            Formula f = read_formula(formula_text, sig);
            c = characterize(f, sig);
        }
        VerificationReport report = verify_unique(c.formula, c, bounds, opt.jobs);
        print_report(report, opt);
        std::exit(report_exit(report));
    });

    int vd_states = 3, vd_samples = 500;
    auto* cmd_vd = cmd_verify->add_subcommand(
        "duality",
        "check that the examples split all models into an upward and a downward half");
    cmd_vd->add_option("formula", formula_text)->required();
    cmd_vd->add_option("--exhaustive-states", vd_states,
                       "exhaustive bound on model size (default 3)");
    cmd_vd->add_option("--samples", vd_samples, "sampled larger models (default 500)");
    cmd_vd->callback([&] {
        PropSignature sig = signature_of(opt);
        Formula f = read_formula(formula_text, sig);
        Characterization c = characterize(f, sig);
        DualityBounds bounds;
        bounds.exhaustive_states = vd_states;
        bounds.sample_count = vd_samples;
        bounds.seed = opt.seed;
        if (opt.format == "text") std::cout << "seed: " << bounds.seed << '\n';
        VerificationReport report = verify_duality(f, c, bounds, opt.jobs);
        print_report(report, opt);
        std::exit(report_exit(report));
    });

    int vp_samples = 1000, vp_depth = 3;
    auto* cmd_vp = cmd_verify->add_subcommand(
        "preservation", "check that fragment truth survives weak simulations");
    cmd_vp->add_option("--samples", vp_samples, "related pairs to sample (default 1000)");
    cmd_vp->add_option("--max-depth", vp_depth, "formula depth bound (default 3)");
    cmd_vp->callback([&] {
        PreservationBounds bounds;
        bounds.sample_count = vp_samples;
        bounds.formula_depth = vp_depth;
        bounds.seed = opt.seed;
        if (opt.format == "text") std::cout << "seed: " << bounds.seed << '\n';
        VerificationReport report = verify_preservation(signature_of(opt), bounds, opt.jobs);
        print_report(report, opt);
        std::exit(report_exit(report));
    });

    // spoiler: defeat a labeled example set within the full language.
    auto* cmd_spoiler = app.add_subcommand(
        "spoiler",
        "produce a non-equivalent full-language formula fitting the same labeled examples");
    cmd_spoiler->add_option("formula", formula_text)->required();
    cmd_spoiler->add_option("--pos", pos_files, "positive example files")
        ->check(CLI::ExistingFile);
    cmd_spoiler->add_option("--neg", neg_files, "negative example files")
        ->check(CLI::ExistingFile);
    cmd_spoiler->callback([&] {
        PropSignature sig = signature_of(opt);
        Formula f = read_formula(formula_text, sig);
        std::vector<PointedModel> pos, neg;
        for (const auto& p : pos_files) pos.push_back(load_model(p));
        for (const auto& p : neg_files) neg.push_back(load_model(p));
        if (FitResult r = fits(f, pos, neg); !r.ok) {
            std::cerr << "input formula does not fit the examples\n";
            std::exit(kExitFail);
        }
        SpoilerResult r = spoiler_full_language(f, pos, neg, sig);
        std::cout << "spoiler: " << to_string(r.spoiler) << '\n'
                  << "case: " << (r.box_bounded ? "box-bounded" : "unbounded") << '\n'
                  << "height level: " << r.height_level << '\n'
                  << "separating model:\n"
                  << to_json(r.witness) << '\n';
    });

    // tower: example counts for iterated boxes against the tower function.
    int tower_n = 3;
    bool tower_deep = false;
    auto* cmd_tower = app.add_subcommand(
        "tower", "example counts for Box^n p against the tower function");
    cmd_tower->add_option("--max-n", tower_n, "largest n (default 3)");
    cmd_tower->add_flag("--deep", tower_deep, "allow n = 4 (65536 examples)");
    cmd_tower->callback([&] {
        if (tower_n > 3 && !tower_deep)
            throw CLI::ValidationError("--max-n", "n = 4 requires --deep");
        auto rows = tower_table(tower_n);
        bool all_match = true;
        for (const auto& row : rows) {
            std::cout << "n=" << row.n << "  constructed=" << row.constructed
                      << "  tower(n,2)=" << row.expected << '\n';
            all_match = all_match && row.constructed == row.expected;
        }
        std::exit(all_match ? kExitPass : kExitFail);
    });

    // fixtures: the concrete counterexample models.
    auto* cmd_fixtures = app.add_subcommand("fixtures", "emit fixture model families");
    cmd_fixtures->require_subcommand(1);
    auto* cmd_coproduct = cmd_fixtures->add_subcommand(
        "coproduct", "the four models witnessing the absence of coproducts");
    cmd_coproduct->add_option("--out", out_dir, "output directory");
    cmd_coproduct->callback([&] {
        PropSignature sig =
            opt.props.empty() ? PropSignature{{"p", "q", "r"}} : PropSignature{opt.props};
        CoproductFixtures fx = coproduct_fixtures(sig);
        if (!out_dir.empty()) {
            std::filesystem::create_directories(out_dir);
            save_model(fx.a, out_dir + "/A.json");
            save_model(fx.b, out_dir + "/B.json");
            save_model(fx.c, out_dir + "/C.json");
            save_model(fx.c_prime, out_dir + "/C_prime.json");
            std::cout << "wrote A, B, C, C_prime to " << out_dir << '\n';
        } else {
            std::cout << to_json(fx.a) << '\n' << to_json(fx.b) << '\n' << to_json(fx.c) << '\n'
                      << to_json(fx.c_prime) << '\n';
        }
    });

    // Global options (--props, --seed, --jobs, --format) may follow the
    // subcommand on the command line.
    auto enable_fallthrough = [](auto&& self, CLI::App* node) -> void {
        for (CLI::App* sub : node->get_subcommands(/*filter=*/[](CLI::App*) { return true; })) {
            sub->fallthrough(true);
            self(self, sub);
        }
    };
    enable_fallthrough(enable_fallthrough, &app);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : kExitUsage;
    } catch (const ParseError& e) {
        std::cerr << "formula parse error at position " << e.position << ": " << e.what()
                  << '\n';
        return kExitParse;
    } catch (const SizeLimitError& e) {
        std::cerr << "bound abort: " << e.what() << '\n';
        return kExitBound;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitParse;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitFail;
    }
    return kExitPass;
}
