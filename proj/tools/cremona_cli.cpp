// Command-line surface: equivalence chains, linearization, certificate
// verification, the divisorial obstruction, and fixture generators.
//
// Exit codes: 0 success, 2 parse/input errors, 3 hypothesis violation
// (n < r+2), 4 verification failure, 5 retry exhaustion.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "cremona/cremona.hpp"

namespace {

using namespace cremona;

constexpr int kExitParse = 2;
constexpr int kExitHypothesis = 3;
constexpr int kExitVerification = 4;
constexpr int kExitRetry = 5;

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw parse_error("cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw parse_error("cannot write '" + path + "'");
    out << text;
}

struct CommonFlags {
    std::string input;
    std::string output;
    u64 seed = 1;
    int trials = 100;
    int k_max = kDefaultKMax;
    std::optional<u64> prime;
    bool rationals = false;
    bool require_injectivity = false;
    int verbosity = 0;
};

void add_run_flags(CLI::App* cmd, CommonFlags& flags, bool needs_input) {
    if (needs_input) cmd->add_option("--input,-i", flags.input, "input document (JSON)")->required();
    cmd->add_option("--output,-o", flags.output, "write the certificate to this path");
    cmd->add_option("--seed", flags.seed, "master seed");
    cmd->add_option("--trials", flags.trials, "trials per randomized equality gate")->check(CLI::PositiveNumber);
    cmd->add_option("--kmax", flags.k_max, "largest surface degree to try")->check(CLI::PositiveNumber);
    cmd->add_option("--prime", flags.prime, "prime field modulus override");
    cmd->add_flag("--rationals", flags.rationals, "work over exact rationals");
    cmd->add_flag("--require-injectivity-heuristic", flags.require_injectivity,
                  "abort when the injectivity heuristic finds a collision");
    cmd->add_flag("-v,--verbose", flags.verbosity, "progress notes on stderr");
}

// Precedence: explicit flags, then the document, then the CREMONA_PRIME
// environment override of the built-in default.
FieldSpec resolve_field(const CommonFlags& flags, const std::optional<FieldSpec>& from_doc) {
    if (flags.rationals) return FieldSpec::make_rationals();
    if (flags.prime) return FieldSpec::make_prime(*flags.prime);
    if (from_doc) return *from_doc;
    if (const char* env = std::getenv("CREMONA_PRIME")) {
        try {
            return FieldSpec::make_prime(std::stoull(env));
        } catch (const std::exception&) {
            throw parse_error(std::string("bad CREMONA_PRIME value '") + env + "'");
        }
    }
    return FieldSpec::make_prime(kDefaultPrime);
}

int run_equivalence(const CommonFlags& flags, bool linearize) {
    InputDoc doc = parse_input_document(read_file(flags.input));
    FieldSpec field = resolve_field(flags, doc.field_specified ? std::optional<FieldSpec>(doc.field) : std::nullopt);
    if (linearize) {
        doc.G_text.clear();
        for (int i = 0; i <= doc.r; ++i) doc.G_text.push_back("s" + std::to_string(i));
    }
    if (doc.G_text.empty()) throw parse_error("equivalence needs a G system (or use the linearize subcommand)");

    json report;
    report["command"] = linearize ? "linearize" : "equivalence";
    report["field"] = field.rationals ? json("rationals") : json{{"prime", field.prime}};
    report["seed"] = flags.seed;

    with_field(field, [&]<class F>() {
        auto L = detail::system_from_texts<F>(doc.L_text, doc.r + 1, 's', "L");
        auto G = detail::system_from_texts<F>(doc.G_text, doc.r + 1, 's', "G");
        ChainOptions opts;
        opts.trials = flags.trials;
        opts.k_max = flags.k_max;
        opts.require_injectivity = flags.require_injectivity;
        if (flags.verbosity) std::cerr << "running chain over " << field.description() << "\n";
        auto cert = run_chain<F>(L, G, doc.r, doc.n, field, flags.seed, opts);
        report["steps"] = cert.steps.size();
        report["early_termination"] =
            cert.early_termination_step ? json{{"at_step", *cert.early_termination_step}} : json();
        report["injectivity"] = json{{"L", cert.injectivity_L}, {"G", cert.injectivity_G}};
        auto text = emit_certificate(cert);
        if (!flags.output.empty()) {
            write_file(flags.output, text);
            report["certificate_path"] = flags.output;
        } else {
            report["certificate"] = certificate_to_json(cert);
        }
    });
    report["status"] = "ok";
    std::cout << report.dump(1) << "\n";
    return 0;
}

int run_verify(const std::string& cert_path, u64 seed, int trials) {
    std::string text = read_file(cert_path);
    FieldSpec field = certificate_field(text);
    json report;
    report["command"] = "verify";
    report["certificate_path"] = cert_path;
    bool ok = with_field(field, [&]<class F>() {
        auto cert = parse_certificate<F>(text);
        Rng rng(seed);
        auto result = verify_certificate(cert, trials, rng);
        report["trials"] = trials;
        report["seed"] = seed;
        report["failures"] = result.failures;
        return result.ok();
    });
    report["status"] = ok ? "ok" : "failed";
    std::cout << report.dump(1) << "\n";
    return ok ? 0 : kExitVerification;
}

int run_obstruct(int n, int d, const std::string& mults_text, bool ordinary) {
    DivisorialInput input;
    input.n = n;
    input.d = d;
    std::stringstream ss(mults_text);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        if (tok.empty()) continue;
        int m = 0;
        try {
            m = std::stoi(tok);
        } catch (const std::exception&) {
            throw parse_error("bad multiplicity '" + tok + "'");
        }
        input.singularities.push_back({m, ordinary});
    }
    auto result = check_obstruction(input);
    json report;
    report["command"] = "obstruct";
    report["n"] = n;
    report["d"] = d;
    json discs = json::array();
    for (const auto& a : result.discrepancies) discs.push_back(a.to_string());
    report["discrepancies"] = discs;
    report["verdict"] = result.obstructed ? "obstructed" : "inconclusive";
    report["explanation"] = result.explanation;
    report["status"] = "ok";
    std::cout << report.dump(1) << "\n";
    return 0;
}

json fixture_twisted_cubic(const FieldSpec& field) {
    InputDoc doc;
    doc.field = field;
    doc.r = 1;
    doc.n = 3;
    doc.L_text = {"s0^3", "s0^2*s1", "s0*s1^2", "s1^3"};
    doc.G_text = {"s0", "s1"};
    return input_to_json(doc);
}

json fixture_veronese_surface(const FieldSpec& field) {
    InputDoc doc;
    doc.field = field;
    doc.r = 2;
    doc.n = 4;
    doc.L_text = {"s0^2", "s1^2", "s2^2", "s0*s1", "s0*s2"};
    doc.G_text = {"s0", "s1", "s2"};
    return input_to_json(doc);
}

int run_examples(const std::string& which, int a, u64 seed, const CommonFlags& flags) {
    FieldSpec field = resolve_field(flags, std::nullopt);
    json doc;
    if (which == "twisted-cubic") {
        doc = fixture_twisted_cubic(field);
    } else if (which == "veronese-surface") {
        doc = fixture_veronese_surface(field);
    } else if (which == "nodal-curve") {
        doc = with_field(field, [&]<class F>() {
            Rng rng(seed);
            auto curve = gen_nodal_curve<F>(a, rng);
            InputDoc out;
            out.field = field;
            out.r = 1;
            out.n = 2;
            for (const auto& e : curve.system.entries) out.L_text.push_back(e.to_string('s'));
            out.G_text = {"s0", "s1"};
            json j = input_to_json(out);
            json meta;
            meta["a"] = a;
            meta["degree"] = curve.system.degree;
            meta["p"] = curve.p.to_string('s');
            meta["q"] = curve.q.to_string('s');
            json center = json::array();
            for (const auto& x : curve.center) center.push_back(x.to_string());
            meta["center"] = center;
            // genus count for the generic projection; documentation, not a claim
            meta["expected_nodes"] = curve.expected_nodes;
            j["meta"] = meta;
            return j;
        });
    } else {
        throw parse_error("unknown example '" + which + "'");
    }
    std::string text = doc.dump(1) + "\n";
    if (!flags.output.empty()) {
        write_file(flags.output, text);
        json report;
        report["command"] = "examples";
        report["example"] = which;
        report["output"] = flags.output;
        report["status"] = "ok";
        std::cout << report.dump(1) << "\n";
    } else {
        std::cout << text;
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"explicit Cremona equivalences between birational embeddings of parametrized varieties"};
    app.require_subcommand(1);

    CommonFlags eq_flags, lin_flags, ex_flags;
    auto* eq = app.add_subcommand("equivalence", "build and verify a chain of Cremona transformations");
    add_run_flags(eq, eq_flags, true);
    auto* lin = app.add_subcommand("linearize", "chain onto the zero-padded linear system (rational X)");
    add_run_flags(lin, lin_flags, true);

    std::string cert_path;
    u64 verify_seed = 1;
    int verify_trials = 100;
    auto* ver = app.add_subcommand("verify", "independently re-check a certificate");
    ver->add_option("certificate", cert_path, "certificate file")->required();
    ver->add_option("--seed", verify_seed, "verification seed");
    ver->add_option("--trials", verify_trials, "trials per randomized check")->check(CLI::PositiveNumber);

    int ob_n = 2, ob_d = 6;
    std::string ob_mults = "2";
    bool ob_ordinary = false;
    auto* ob = app.add_subcommand("obstruct", "divisorial obstruction report");
    ob->add_option("--n", ob_n, "ambient dimension")->required();
    ob->add_option("--d", ob_d, "degree of the hypersurface")->required();
    ob->add_option("--mults", ob_mults, "comma-separated multiplicities")->required();
    ob->add_flag("--ordinary", ob_ordinary, "all listed singularities are ordinary");

    std::string ex_which;
    int ex_a = 5;
    auto* ex = app.add_subcommand("examples", "emit ready-made input documents");
    ex->add_option("example", ex_which, "one of: twisted-cubic, veronese-surface, nodal-curve")->required();
    ex->add_option("--a", ex_a, "bidegree parameter for nodal-curve")->check(CLI::PositiveNumber);
    add_run_flags(ex, ex_flags, false);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : kExitParse;
    }

    try {
        if (eq->parsed()) return run_equivalence(eq_flags, false);
        if (lin->parsed()) return run_equivalence(lin_flags, true);
        if (ver->parsed()) return run_verify(cert_path, verify_seed, verify_trials);
        if (ob->parsed()) return run_obstruct(ob_n, ob_d, ob_mults, ob_ordinary);
        if (ex->parsed()) return run_examples(ex_which, ex_a, ex_flags.seed, ex_flags);
    } catch (const hypothesis_violation& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitHypothesis;
    } catch (const parse_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitParse;
    } catch (const all_zero_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitParse;
    } catch (const retry_exhausted& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitRetry;
    } catch (const verification_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitVerification;
    } catch (const error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
