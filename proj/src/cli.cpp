#include "strata/cli.hpp"

#include "strata/corpus.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

namespace strata {
namespace cli {

using alg::Algebra;
using alg::Config;
using cell::CellularDatum;
using cell::Label;
using cell::Report;
using cell::System;
using chains::Certificate;
using chains::CertifyOutcome;

namespace {

constexpr unsigned long kDefaultBudget = 100000;

unsigned long default_budget() {
    if (const char* env = std::getenv("STRATA_BUDGET")) {
        try {
            return std::stoul(env);
        } catch (...) {
            throw Error(Errc::Input, "STRATA_BUDGET is not a number");
        }
    }
    return kDefaultBudget;
}

void write_text(const std::string& path, const std::string& content, std::ostream& out) {
    if (path.empty()) {
        out << content;
        return;
    }
    std::ofstream os(path, std::ios::binary);
    check(os.good(), Errc::Input, "cannot open '" + path + "' for writing");
    os << content;
}

/// The full axiom and structure-map suite behind `verify-system`.
Report full_system_report(System& S) {
    Report rep = cell::verify_axioms(S);
    if (!rep.pass)
        return rep;
    for (const Label& l : S.datum().poset().linear_extension()) {
        try {
            cell::GramTable gt = cell::gram_table(S, l);
            rep.add(true, "Gram table probe-independence at " + l);
            cell::PhiResult ph = cell::phi(S, l);
            rep.add(true, "pairing is balanced at " + l,
                    "im(phi) dim " + std::to_string(ph.image_ideal.dim()));
            cell::MIsoResult mi = cell::m_iso(S, l);
            rep.add(mi.bijective, "layer bimodule map bijective at " + l);
            rep.add(mi.left_decomp_checked, "layer decomposes into |J| standard blocks at " + l);
            bool assoc = cell::check_associativity(S, l);
            rep.add(assoc, "pairing associativity identity at " + l);
        } catch (const Error& e) {
            rep.add(false, "structure maps at " + l, e.what());
        }
    }
    Report order = cell::order_compat(S);
    for (const auto& item : order.items)
        rep.add(item.pass, item.name, item.witness);
    return rep;
}

int cmd_verify_system(const std::string& alg_path, const std::string& sys_path,
                      const std::string& report_path, const std::string& cert_path,
                      std::ostream& out) {
    Algebra A = corpus::load_algebra(alg_path);
    CellularDatum dat = corpus::load_system(sys_path, A);
    System S(dat);
    Report rep = full_system_report(S);
    write_text(report_path, rep.str(), out);
    if (rep.pass && !cert_path.empty()) {
        Certificate cert;
        cert.claim = chains::Claim::CellularSystemValid;
        cert.source = chains::CertSource::VerifySystem;
        cert.subject_hash = chains::subject_hash(A);
        cert.note = "axiom and structure-map suite";
        cert.system = dat;
        corpus::save_certificate(cert, cert_path);
    }
    return rep.pass ? 0 : 1;
}

int cmd_classify(const std::string& alg_path, const std::string& sys_path,
                 const std::string& report_path, const Config& cfg, std::ostream& out) {
    Algebra A = corpus::load_algebra(alg_path);
    CellularDatum dat = corpus::load_system(sys_path, A);
    System S(dat);
    std::vector<Label> irr = rep::lambda_irr(S, cfg);
    std::ostringstream os;
    os << "lambda dimL dimDelta dimP filtration\n";
    for (const Label& l : irr) {
        rep::AModule L = rep::simple(S, l, cfg);
        rep::AModule P = rep::projective_cover(S, l, cfg);
        rep::DeltaFiltration filt = rep::delta_filtration(S, P, cfg, l);
        os << l << " " << L.dim() << " " << S.delta(l).dim << " " << P.dim() << " ";
        bool first = true;
        for (const auto& [mu, m] : filt.sections) {
            os << (first ? "" : " ") << mu << ":" << m;
            first = false;
        }
        os << "\n";
    }
    write_text(report_path, os.str(), out);
    return 0;
}

int cmd_decide_qh(const std::string& alg_path, unsigned long budget, const std::string& cert_path,
                  const Config& cfg, std::ostream& out) {
    Algebra A = corpus::load_algebra(alg_path);
    Certificate cert = chains::decide_qh_bounded(A, budget, cfg);
    std::string text = corpus::certificate_to_string(cert);
    write_text(cert_path, text, out);
    switch (cert.claim) {
    case chains::Claim::QuasiHereditary: return 0;
    case chains::Claim::NotQhExhausted: return 1;
    default: return 2;
    }
}

int cmd_from_chain(const std::string& alg_path, const std::string& chain_path,
                   const std::string& system_out, const std::string& cert_path, const Config& cfg,
                   std::ostream& out, std::ostream& err) {
    Algebra A = corpus::load_algebra(alg_path);
    std::vector<exact::Subspace> ideals = corpus::load_chain(chain_path, A.spec());
    chains::ChainVerification cv = chains::verify_heredity_chain(A, ideals, cfg);
    if (cv.inconclusive) {
        err << "inconclusive: " << cv.failure << "\n";
        return 2;
    }
    if (!cv.ok) {
        err << "not a heredity chain: " << cv.failure << "\n";
        return 1;
    }
    CellularDatum dat = chains::system_from_heredity_chain(A, ideals, cfg);
    if (!system_out.empty())
        corpus::save_system(dat, system_out);
    else
        out << corpus::system_to_string(dat);
    System S(dat);
    CertifyOutcome outc = chains::certify_qh_from_system(S, cfg);
    check(outc.kind == CertifyOutcome::Kind::Certified, Errc::InternalCheck,
          "constructed system did not certify");
    write_text(cert_path, corpus::certificate_to_string(outc.cert), out);
    return 0;
}

int cmd_stratify(const std::string& alg_path, const std::string& sys_path,
                 const std::string& cert_path, const Config& cfg, std::ostream& out,
                 std::ostream& err) {
    Algebra A = corpus::load_algebra(alg_path);
    CellularDatum dat = corpus::load_system(sys_path, A);
    System S(dat);
    CertifyOutcome outc = chains::stratification_from_local_system(S, cfg);
    if (outc.kind == CertifyOutcome::Kind::Refuted) {
        err << "not certified: " << outc.refutation << "\n";
        return 1;
    }
    write_text(cert_path, corpus::certificate_to_string(outc.cert), out);
    return outc.kind == CertifyOutcome::Kind::Certified ? 0 : 2;
}

int cmd_corpus_list(std::ostream& out) {
    for (const std::string& n : corpus::builtin_names())
        out << n << "\n";
    return 0;
}

int cmd_corpus_emit(const std::string& name, const std::string& dir,
                    const std::optional<unsigned long>& seed, std::ostream& out) {
    corpus::CorpusEntry entry = corpus::builtin(name);
    if (seed.has_value())
        entry = corpus::random_basis_change(entry, *seed);
    std::string base = dir + "/" + name + (seed.has_value() ? ".seed" + std::to_string(*seed) : "");
    corpus::save_algebra(entry.algebra, base + ".alg");
    out << base << ".alg\n";
    for (const auto& [sysname, sys] : entry.systems) {
        corpus::save_system(sys, base + "." + sysname + ".sys");
        out << base << "." << sysname << ".sys\n";
    }
    // the canonical layer chain of the primary system, for from-chain runs
    System S(entry.system(entry.primary_system));
    if (cell::verify_axioms(S).pass) {
        chains::IdealChain chain = chains::chain_from_system(S);
        corpus::save_chain(chain.ideals, base + ".chain");
        out << base << ".chain\n";
    }
    return 0;
}

int cmd_replay(const std::string& cert_path, const std::string& alg_path, const Config& cfg,
               std::ostream& err) {
    Algebra A = corpus::load_algebra(alg_path);
    Certificate cert = corpus::load_certificate(cert_path, A);
    int rc = chains::replay_certificate(cert, A, cfg);
    if (rc != 0)
        err << "replay: claim '" << chains::claim_token(cert.claim)
            << (rc == 1 ? "' refuted\n" : "' could not be re-established\n");
    return rc;
}

} // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"exact verifier for cellular systems, heredity chains and stratifications"};
    app.require_subcommand(1);

    std::string alg_path, sys_path, chain_path, cert_in, report_path, cert_path, system_out;
    std::string corpus_name, corpus_dir;
    unsigned long budget = 0;
    std::optional<unsigned long> seed;
    Config cfg;
    bool no_fallback = false;

    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--exhaustion-cap", cfg.exhaustion_cap,
                        "finite-field enumeration bound");
        cmd->add_flag("--no-char-p-fallback", no_fallback,
                      "disable the small-characteristic radical fallback");
    };

    CLI::App* vs = app.add_subcommand("verify-system", "run the axiom and structure-map suite");
    vs->add_option("-a,--algebra", alg_path)->required();
    vs->add_option("-s,--system", sys_path)->required();
    vs->add_option("--report", report_path);
    vs->add_option("--cert", cert_path);
    add_common(vs);

    CLI::App* cl = app.add_subcommand("classify", "simples, standard modules and filtrations");
    cl->add_option("-a,--algebra", alg_path)->required();
    cl->add_option("-s,--system", sys_path)->required();
    cl->add_option("--report", report_path);
    add_common(cl);

    CLI::App* dq = app.add_subcommand("decide-qh", "bounded search for a heredity chain");
    dq->add_option("-a,--algebra", alg_path)->required();
    dq->add_option("--budget", budget);
    dq->add_option("-o,--out", cert_path);
    add_common(dq);

    CLI::App* fc = app.add_subcommand("from-chain", "build a full divisible system from a chain");
    fc->add_option("-a,--algebra", alg_path)->required();
    fc->add_option("-c,--chain", chain_path)->required();
    fc->add_option("--system-out", system_out);
    fc->add_option("-o,--out", cert_path);
    add_common(fc);

    CLI::App* st = app.add_subcommand("stratify", "certify a standard stratification");
    st->add_option("-a,--algebra", alg_path)->required();
    st->add_option("-s,--system", sys_path)->required();
    st->add_option("-o,--out", cert_path);
    add_common(st);

    CLI::App* co = app.add_subcommand("corpus", "built-in example algebras and systems");
    CLI::App* co_list = co->add_subcommand("list", "list builtin names");
    CLI::App* co_emit = co->add_subcommand("emit", "write an entry's files into a directory");
    co_emit->add_option("name", corpus_name)->required();
    co_emit->add_option("dir", corpus_dir)->required();
    co_emit->add_option("--seed", seed, "emit the seeded basis-change variant");
    co->require_subcommand(1);

    CLI::App* rp = app.add_subcommand("replay", "re-verify a certificate from file");
    rp->add_option("-t,--certificate", cert_in)->required();
    rp->add_option("-a,--algebra", alg_path)->required();
    add_common(rp);

    try {
        std::vector<std::string> rev(args.rbegin(), args.rend());
        app.parse(rev);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) {
            out << app.help();
            return 0;
        }
        err << "argument error: " << e.what() << "\n";
        return 3;
    }
    cfg.char_p_fallback = !no_fallback;

    try {
        if (vs->parsed())
            return cmd_verify_system(alg_path, sys_path, report_path, cert_path, out);
        if (cl->parsed())
            return cmd_classify(alg_path, sys_path, report_path, cfg, out);
        if (dq->parsed())
            return cmd_decide_qh(alg_path, budget ? budget : default_budget(), cert_path, cfg, out);
        if (fc->parsed())
            return cmd_from_chain(alg_path, chain_path, system_out, cert_path, cfg, out, err);
        if (st->parsed())
            return cmd_stratify(alg_path, sys_path, cert_path, cfg, out, err);
        if (co->parsed()) {
            if (co_list->parsed())
                return cmd_corpus_list(out);
            if (co_emit->parsed())
                return cmd_corpus_emit(corpus_name, corpus_dir, seed, out);
        }
        if (rp->parsed())
            return cmd_replay(cert_in, alg_path, cfg, err);
        err << "no command given\n";
        return 3;
    } catch (const Error& e) {
        switch (e.code()) {
        case Errc::Inconclusive:
            err << "inconclusive: " << e.what() << "\n";
            return 2;
        case Errc::AxiomViolation:
            err << "refuted: " << e.what() << "\n";
            return 1;
        default:
            err << "error: " << e.what() << "\n";
            return 3;
        }
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 3;
    }
}

} // namespace cli
} // namespace strata
