#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "tlc/ccc.hpp"
#include "tlc/certificate.hpp"
#include "tlc/error.hpp"
#include "tlc/models.hpp"
#include "tlc/normalize.hpp"
#include "tlc/numerals.hpp"
#include "tlc/products.hpp"
#include "tlc/separator.hpp"
#include "tlc/stack.hpp"
#include "tlc/syntax.hpp"

using namespace tlc;

namespace {

enum Exit { kOk = 0, kNegative = 1, kParse = 2, kType = 3, kEqual = 4, kBudget = 5, kSchema = 6, kOther = 7 };

struct Settings {
    unsigned max_base = 3;
    unsigned max_level = 24;
    std::size_t mem_budget_mib = 2048;
    unsigned jobs = 1;
};

std::string read_file(const std::string& path) {
    if (path == "-") {
        std::ostringstream ss;
        ss << std::cin.rdbuf();
        return ss.str();
    }
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot read " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

/// Two terms separated by a line holding only `---`.
std::pair<std::string, std::string> read_pair(const std::string& path) {
    std::istringstream in(read_file(path));
    std::string line, first, second;
    bool after = false;
    while (std::getline(in, line)) {
        if (line.find_first_not_of(" \t\r") != std::string::npos && line.substr(0, line.find_last_not_of(" \t\r") + 1) == "---") {
            if (after) throw ParseError(0, path + ": more than one '---' separator");
            after = true;
            continue;
        }
        (after ? second : first) += line + "\n";
    }
    if (!after) throw ParseError(0, path + ": missing '---' separator");
    return {first, second};
}

/// Terms parsed together so that shared free names get one type.
std::vector<Term> parse_terms(const std::vector<std::string>& texts, const std::string& context) {
    Context declared = context.empty() ? Context{} : parse_context(context);
    std::vector<SurfacePtr> surfaces;
    std::vector<const SurfaceTerm*> raw;
    for (const auto& t : texts) {
        surfaces.push_back(parse_surface(t));
        raw.push_back(surfaces.back().get());
    }
    Context ctx = infer_context(raw, declared);
    std::vector<Term> out;
    for (const auto& s : surfaces) out.push_back(elaborate(*s, ctx));
    return out;
}

void write_output(const std::string& text, const std::string& path) {
    if (path.empty() || path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << text;
}

std::string measure_text(const std::optional<mpz_class>& m) { return m ? m->get_str() : "-"; }

int report(const std::exception& e, int code) {
    std::cerr << "tlc: " << e.what() << "\n";
    return code;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Typed lambda calculus toolkit: normal forms, separation certificates, type isomorphisms, CCC."};
    app.require_subcommand(1);
    app.fallthrough();
    Settings s;
    app.add_option("--max-base", s.max_base, "Largest model base searched when separating")
        ->envname("TLC_MAX_BASE")
        ->check(CLI::Range(2u, 16u));
    app.add_option("--max-level", s.max_level, "Largest numeral level allowed in certificates")->envname("TLC_MAX_LEVEL");
    app.add_option("--mem-budget", s.mem_budget_mib, "Evaluator memory budget in MiB (0 for none)")
        ->envname("TLC_MEM_BUDGET");
    app.add_option("--jobs", s.jobs, "Worker threads for model search")->envname("TLC_JOBS")->check(CLI::PositiveNumber);

    std::function<int()> action;
    std::string context, pair_file, out_file;
    std::vector<std::string> terms;

    auto* normalize = app.add_subcommand("normalize", "Print the beta-eta normal form of a term");
    std::string norm_term;
    bool long_form = false, rewriting = false;
    normalize->add_option("term", norm_term, "Term in surface syntax")->required();
    auto* long_flag = normalize->add_flag("--long", long_form, "Long (eta-expanded) normal form");
    normalize->add_flag("--contracted", "Eta-contracted normal form (default)")->excludes(long_flag);
    normalize->add_flag("--rewriting", rewriting, "Use the substitution-based normalizer");
    normalize->add_option("--context", context, "Declared free variables, e.g. \"f:p->p, x:p\"");
    normalize->callback([&] {
        action = [&] {
            Term t = parse_terms({norm_term}, context)[0];
            Strategy st = rewriting ? Strategy::Rewriting : Strategy::Evaluation;
            NormalForm nf = long_form ? long_nf(t, st) : beta_eta_nf(t, st);
            std::cout << to_string(nf.term) << "\n";
            return kOk;
        };
    });

    auto* eq = app.add_subcommand("eq", "Decide beta-eta equality; exit 0 when equal, 1 otherwise");
    eq->add_option("terms", terms, "Two terms")->expected(0, 2);
    eq->add_option("--pair", pair_file, "File holding two terms separated by '---'");
    eq->add_option("--context", context, "Declared free variables");
    eq->callback([&] {
        action = [&] {
            if (!pair_file.empty()) {
                auto [a, b] = read_pair(pair_file);
                terms = {a, b};
            }
            if (terms.size() != 2) throw CLI::ValidationError("eq", "needs two terms");
            auto ts = parse_terms(terms, context);
            bool equal = decide_eq(ts[0], ts[1]);
            std::cout << (equal ? "equal" : "not-equal") << "\n";
            return equal ? kOk : kNegative;
        };
    });

    auto* sep = app.add_subcommand("separate", "Emit a separation certificate as JSON");
    bool two_valued = false, product = false;
    std::optional<unsigned> level;
    sep->add_option("terms", terms, "a b [c d]")->expected(0, 4);
    sep->add_option("--pair", pair_file, "File holding a and b separated by '---'");
    sep->add_option("--context", context, "Declared free variables");
    auto* tv = sep->add_flag("--two-valued", two_valued, "Targets \\x y. x and \\x y. y (default without c, d)");
    sep->add_flag("--product", product, "Separate terms with product types")->excludes(tv);
    sep->add_option("--level", level, "Even numeral level to use instead of the least one");
    sep->add_option("--out", out_file, "Write the certificate here instead of stdout");
    sep->callback([&] {
        action = [&] {
            if (!pair_file.empty()) {
                auto [a, b] = read_pair(pair_file);
                terms.insert(terms.begin(), {a, b});
            }
            if (terms.size() != 2 && terms.size() != 4) throw CLI::ValidationError("separate", "needs a b or a b c d");
            if (terms.size() == 4 && (two_valued || product))
                throw CLI::ValidationError("separate", "c and d cannot be combined with --two-valued or --product");
            auto ts = parse_terms(terms, context);
            SeparateOptions opts;
            opts.search.max_base = s.max_base;
            opts.search.jobs = s.jobs;
            opts.max_level = s.max_level;
            opts.level = level;
            bool products = product || (ts.size() == 2 && (!is_product_free(ts[0]) || !is_product_free(ts[1])));
            CertificateEnvelope env = ts.size() == 4 ? wrap(separate(ts[0], ts[1], ts[2], ts[3], opts))
                                      : products     ? wrap(separate_prod(ts[0], ts[1], opts))
                                                     : wrap(separate_two(ts[0], ts[1], Type::atom("p"), opts));
            write_output(serialize(env), out_file);
            return kOk;
        };
    });

    auto* ver = app.add_subcommand("verify", "Replay a certificate; prints pass or fail");
    std::string cert_file;
    ver->add_option("certificate", cert_file, "Certificate file, or - for stdin")->required();
    ver->callback([&] {
        action = [&] {
            bool ok = verify(parse_certificate(read_file(cert_file)));
            std::cout << (ok ? "pass" : "fail") << "\n";
            return ok ? kOk : kNegative;
        };
    });

    auto* tnf = app.add_subcommand("type-nf", "Product normal form of a type");
    std::string type_text;
    bool outermost = false, trace = false;
    unsigned weight = 2;
    tnf->add_option("type", type_text, "Type in surface syntax")->required();
    tnf->add_flag("--outermost", outermost, "Reduce outermost redexes first");
    tnf->add_flag("--trace", trace, "Print the reduction steps with complexity measures");
    tnf->add_option("--weight", weight, "Weight of atoms and T in the complexity measure")->check(CLI::Range(2u, 64u));
    tnf->callback([&] {
        action = [&] {
            TypeNFOptions o;
            o.order = outermost ? ReductionOrder::Outermost : ReductionOrder::Innermost;
            o.atom_weight = weight;
            o.record_measures = trace;
            auto tr = type_nf(parse_type(type_text), o);
            if (trace) {
                std::size_t k = 0;
                for (const auto& st : tr.steps)
                    std::cout << ++k << "\t" << (st.position.empty() ? "." : st.position) << "\t" << rule_name(st.rule)
                              << "\t" << st.before.to_string() << "\t" << st.after.to_string() << "\t"
                              << measure_text(st.measure_before) << "\t" << measure_text(st.measure_after) << "\n";
            }
            std::cout << tr.output.to_string() << "\n";
            return kOk;
        };
    });

    auto* iso = app.add_subcommand("iso", "Isomorphism between a type and its product normal form");
    iso->add_option("type", type_text, "Type in surface syntax")->required();
    iso->callback([&] {
        action = [&] {
            IsoWitness w = build_iso(parse_type(type_text));
            std::cout << "target: " << w.target.to_string() << "\n";
            std::cout << "forward: " << to_string(w.forward) << "\n";
            std::cout << "backward: " << to_string(w.backward) << "\n";
            bool ok = check_iso(w);
            if (!ok) std::cerr << "tlc: round trips do not reduce to the identity\n";
            return ok ? kOk : kNegative;
        };
    });

    auto* def = app.add_subcommand("define", "Term i-defining a functional of a finite model");
    unsigned base = 2, def_level = 0;
    std::uint64_t code = 0;
    std::string fn_type = "p";
    bool check_def = false;
    def->add_option("--model", base, "Model size P")->check(CLI::Range(1u, 16u));
    def->add_option("--functional", code, "Canonical code of the functional")->required();
    def->add_option("--type", fn_type, "Type of the functional over p");
    def->add_option("--level", def_level, "Numeral level i")->required();
    def->add_flag("--check", check_def, "Exit 1 unless the term i-defines the functional");
    def->callback([&] {
        action = [&] {
            PModel m{base};
            Type t = parse_type(fn_type);
            if (code >= cardinality(m, t)) throw IndexOutOfRange("functional code beyond the type's cardinality");
            Functional phi{t, code};
            Term term = define_functional(m, phi, def_level);
            std::cout << to_string(term) << "\n";
            if (check_def && !i_defines_check(term, m, phi, def_level)) return kNegative;
            return kOk;
        };
    });

    auto* comb = app.add_subcommand("combinator", "Print a numeral combinator");
    std::string kind_text;
    unsigned comb_level = 0, comb_k = 0;
    bool abbrev = false;
    comb->add_option("--kind", kind_text, "C R E S M Pi pi1 pi2 T H P Z D, or a numeral [n]")->required();
    comb->add_option("--level", comb_level, "Level i")->required();
    comb->add_option("--k", comb_k, "Parameter k of D");
    comb->add_flag("--abbrev", abbrev, "Abbreviate numerals and arithmetic");
    comb->callback([&] {
        action = [&] {
            Term t;
            if (kind_text.size() > 2 && kind_text.front() == '[' && kind_text.back() == ']')
                t = church(unsigned(std::stoul(kind_text.substr(1, kind_text.size() - 2))), comb_level);
            else
                t = combinator(parse_combinator_kind(kind_text), comb_level, comb_k);
            std::cout << (abbrev ? to_string_abbreviated(t) : to_string(t)) << "\n";
            return kOk;
        };
    });

    auto* ccc = app.add_subcommand("ccc", "Free cartesian closed category");
    ccc->require_subcommand(1);
    auto* check = ccc->add_subcommand("check", "Check the axioms at random types");
    AxiomOptions ax;
    check->add_option("--instances", ax.instances, "Instances per axiom group");
    check->add_option("--seed", ax.seed, "Random seed");
    check->callback([&] {
        action = [&] {
            bool all = true;
            for (const auto& r : check_axioms(ax)) {
                std::cout << r.name << "\t" << r.passed << "/" << r.instances << "\t" << r.law << "\n";
                all = all && r.passed == r.instances;
            }
            std::cout << (all ? "all axioms pass" : "axiom failures") << "\n";
            return all ? kOk : kNegative;
        };
    });
    std::vector<std::string> arrows;
    auto* col = ccc->add_subcommand("collapse", "Certificate deriving p1 = p2 from an unequal pair");
    col->add_option("arrows", arrows, "Two arrow terms")->expected(2);
    col->add_option("--out", out_file, "Write the certificate here instead of stdout");
    col->callback([&] {
        action = [&] {
            SeparateOptions opts;
            opts.search.max_base = s.max_base;
            opts.search.jobs = s.jobs;
            opts.max_level = s.max_level;
            write_output(serialize(wrap(collapse(parse_arrow(arrows[0]), parse_arrow(arrows[1]), opts))), out_file);
            return kOk;
        };
    });
    auto* ceq = ccc->add_subcommand("eq", "Decide equality of two parallel arrows");
    ceq->add_option("arrows", arrows, "Two arrow terms")->expected(2);
    ceq->callback([&] {
        action = [&] {
            bool equal = decide_ccc_eq(parse_arrow(arrows[0]), parse_arrow(arrows[1]));
            std::cout << (equal ? "equal" : "not-equal") << "\n";
            return equal ? kOk : kNegative;
        };
    });
    auto* ctr = ccc->add_subcommand("translate", "Lambda term of an arrow");
    std::string arrow_text;
    ctr->add_option("arrow", arrow_text, "Arrow term")->required();
    ctr->callback([&] {
        action = [&] {
            std::cout << to_string(beta_eta_nf(to_lambda(parse_arrow(arrow_text))).term) << "\n";
            return kOk;
        };
    });
    auto* ccomp = ccc->add_subcommand("compile", "Arrow denoting a closed term of arrow type");
    std::string compile_term;
    ccomp->add_option("term", compile_term, "Closed term")->required();
    ccomp->callback([&] {
        action = [&] {
            std::cout << to_string(compile(parse_terms({compile_term}, "")[0])) << "\n";
            return kOk;
        };
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? kOk : kOther;
    }

    int rc = kOk;
    try {
        run_with_stack([&] {
            CellBudgetScope budget(s.mem_budget_mib * (std::size_t{1} << 20) / kCellBytes);
            rc = action();
        });
    } catch (const ParseError& e) {
        return report(e, kParse);
    } catch (const IllTyped& e) {
        return report(e, kType);
    } catch (const UnboundVariable& e) {
        return report(e, kType);
    } catch (const TypeMismatch& e) {
        return report(e, kType);
    } catch (const IllFormed& e) {
        return report(e, kType);
    } catch (const EqualTerms& e) {
        return report(e, kEqual);
    } catch (const EqualArrows& e) {
        return report(e, kEqual);
    } catch (const ResourceExhausted& e) {
        return report(e, kBudget);
    } catch (const Overflow& e) {
        return report(e, kBudget);
    } catch (const SchemaError& e) {
        return report(e, kSchema);
    } catch (const CLI::ValidationError& e) {
        return report(e, kOther);
    } catch (const std::exception& e) {
        return report(e, kOther);
    }
    return rc;
}
