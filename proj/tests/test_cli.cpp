#include <doctest.h>

#include "strata/cli.hpp"
#include "strata/corpus.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

using namespace strata;
namespace fs = std::filesystem;

namespace {

struct RunResult {
    int code;
    std::string out, err;
};

RunResult run_cli(const std::vector<std::string>& args) {
    std::ostringstream out, err;
    int code = cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
    std::ifstream is(p, std::ios::binary);
    REQUIRE(is.good());
    std::ostringstream os;
    os << is.rdbuf();
    return os.str();
}

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() / ("strata_cli_test_" + std::to_string(::getpid()));
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
    std::string operator/(const std::string& name) const { return (path / name).string(); }
};

} // namespace

TEST_CASE("corpus list and emit") {
    TempDir dir;
    RunResult list = run_cli({"corpus", "list"});
    CHECK(list.code == 0);
    CHECK(list.out.find("upper_triangular.2.Q") != std::string::npos);

    RunResult emit = run_cli({"corpus", "emit", "upper_triangular.2.Q", dir.path.string()});
    CHECK(emit.code == 0);
    CHECK(fs::exists(dir / "upper_triangular.2.Q.alg"));
    CHECK(fs::exists(dir / "upper_triangular.2.Q.rows.sys"));
    CHECK(fs::exists(dir / "upper_triangular.2.Q.chain"));

    RunResult bad = run_cli({"corpus", "emit", "bogus.1.Q", dir.path.string()});
    CHECK(bad.code == 3);
}

TEST_CASE("verify-system: pass, fail and parse error exits") {
    TempDir dir;
    run_cli({"corpus", "emit", "upper_triangular.2.Q", dir.path.string()});
    std::string alg = dir / "upper_triangular.2.Q.alg";

    RunResult ok = run_cli({"verify-system", "-a", alg, "-s", dir / "upper_triangular.2.Q.rows.sys",
                            "--report", dir / "report.txt", "--cert", dir / "valid.cert"});
    CHECK(ok.code == 0);
    CHECK(slurp(dir / "report.txt").find("VERDICT pass") != std::string::npos);
    CHECK(fs::exists(dir / "valid.cert"));

    RunResult broken = run_cli(
        {"verify-system", "-a", alg, "-s", dir / "upper_triangular.2.Q.broken-collision.sys"});
    CHECK(broken.code == 1);
    RunResult broken2 = run_cli(
        {"verify-system", "-a", alg, "-s", dir / "upper_triangular.2.Q.broken-layer.sys"});
    CHECK(broken2.code == 1);

    // truncated system file: parse diagnostic, exit 3
    std::string sys_text = slurp(dir / "upper_triangular.2.Q.rows.sys");
    std::ofstream(dir / "trunc.sys") << sys_text.substr(0, sys_text.size() / 2);
    RunResult trunc = run_cli({"verify-system", "-a", alg, "-s", dir / "trunc.sys"});
    CHECK(trunc.code == 3);
    CHECK(trunc.err.find("parse error") != std::string::npos);

    // the emitted certificate replays
    RunResult rep = run_cli({"replay", "-t", dir / "valid.cert", "-a", alg});
    CHECK(rep.code == 0);
}

TEST_CASE("classify output table") {
    TempDir dir;
    run_cli({"corpus", "emit", "upper_triangular.2.Q", dir.path.string()});
    RunResult r = run_cli({"classify", "-a", dir / "upper_triangular.2.Q.alg", "-s",
                           dir / "upper_triangular.2.Q.rows.sys"});
    CHECK(r.code == 0);
    CHECK(r.out.find("lambda dimL dimDelta dimP filtration") != std::string::npos);
    CHECK(r.out.find("r01 1 1 1 r01:1") != std::string::npos);
    CHECK(r.out.find("r02 1 1 2 r01:1 r02:1") != std::string::npos);
}

TEST_CASE("decide-qh exits and certificates") {
    TempDir dir;
    run_cli({"corpus", "emit", "upper_triangular.2.Q", dir.path.string()});
    run_cli({"corpus", "emit", "truncated_poly.2.Q", dir.path.string()});

    RunResult qh = run_cli({"decide-qh", "-a", dir / "upper_triangular.2.Q.alg", "-o",
                            dir / "t2.cert"});
    CHECK(qh.code == 0);
    CHECK(slurp(dir / "t2.cert").find("claim quasi-hereditary") != std::string::npos);

    RunResult not_qh = run_cli({"decide-qh", "-a", dir / "truncated_poly.2.Q.alg", "-o",
                                dir / "kx.cert"});
    CHECK(not_qh.code == 1);
    CHECK(slurp(dir / "kx.cert").find("claim not-qh-exhausted") != std::string::npos);

    // both replay from file alone
    CHECK(run_cli({"replay", "-t", dir / "t2.cert", "-a", dir / "upper_triangular.2.Q.alg"}).code ==
          0);
    CHECK(run_cli({"replay", "-t", dir / "kx.cert", "-a", dir / "truncated_poly.2.Q.alg"}).code == 0);
    // replaying against the wrong algebra is an input error
    CHECK(run_cli({"replay", "-t", dir / "t2.cert", "-a", dir / "truncated_poly.2.Q.alg"}).code == 3);
}

TEST_CASE("from-chain emits a system and a certificate") {
    TempDir dir;
    run_cli({"corpus", "emit", "upper_triangular.3.Q", dir.path.string()});
    RunResult r = run_cli({"from-chain", "-a", dir / "upper_triangular.3.Q.alg", "-c",
                           dir / "upper_triangular.3.Q.chain", "--system-out", dir / "built.sys",
                           "-o", dir / "built.cert"});
    CHECK(r.code == 0);
    CHECK(fs::exists(dir / "built.sys"));
    RunResult vs = run_cli({"verify-system", "-a", dir / "upper_triangular.3.Q.alg", "-s",
                            dir / "built.sys"});
    CHECK(vs.code == 0);
    CHECK(run_cli({"replay", "-t", dir / "built.cert", "-a", dir / "upper_triangular.3.Q.alg"})
              .code == 0);

    // a non-heredity chain is refused
    run_cli({"corpus", "emit", "truncated_poly.2.Q", dir.path.string()});
    RunResult bad = run_cli({"from-chain", "-a", dir / "truncated_poly.2.Q.alg", "-c",
                             dir / "truncated_poly.2.Q.chain"});
    CHECK(bad.code == 1);
}

TEST_CASE("stratify certificates") {
    TempDir dir;
    run_cli({"corpus", "emit", "truncated_poly.2.Q", dir.path.string()});
    RunResult r = run_cli({"stratify", "-a", dir / "truncated_poly.2.Q.alg", "-s",
                           dir / "truncated_poly.2.Q.local.sys", "-o", dir / "ss.cert"});
    CHECK(r.code == 0);
    CHECK(slurp(dir / "ss.cert").find("claim standardly-stratified") != std::string::npos);
    CHECK(run_cli({"replay", "-t", dir / "ss.cert", "-a", dir / "truncated_poly.2.Q.alg"}).code ==
          0);

    // the divisible presentation is refused at its empty-pairing layer
    RunResult refused = run_cli({"stratify", "-a", dir / "truncated_poly.2.Q.alg", "-s",
                                 dir / "truncated_poly.2.Q.divisible.sys"});
    CHECK(refused.code == 1);
}

TEST_CASE("byte-identical outputs across two runs") {
    TempDir dir;
    run_cli({"corpus", "emit", "upper_triangular.2.Q", dir.path.string()});
    std::string alg = dir / "upper_triangular.2.Q.alg";

    for (int round = 0; round < 2; ++round) {
        std::string suffix = std::to_string(round);
        run_cli({"decide-qh", "-a", alg, "-o", dir / ("dq" + suffix)});
        run_cli({"verify-system", "-a", alg, "-s", dir / "upper_triangular.2.Q.rows.sys",
                 "--report", dir / ("rep" + suffix)});
        run_cli({"classify", "-a", alg, "-s", dir / "upper_triangular.2.Q.rows.sys", "--report",
                 dir / ("cls" + suffix)});
    }
    CHECK(slurp(dir / "dq0") == slurp(dir / "dq1"));
    CHECK(slurp(dir / "rep0") == slurp(dir / "rep1"));
    CHECK(slurp(dir / "cls0") == slurp(dir / "cls1"));

    // seeded corpus variants are reproducible too
    run_cli({"corpus", "emit", "upper_triangular.2.Q", dir.path.string(), "--seed", "5"});
    std::string v1 = slurp(dir / "upper_triangular.2.Q.seed5.alg");
    run_cli({"corpus", "emit", "upper_triangular.2.Q", dir.path.string(), "--seed", "5"});
    CHECK(slurp(dir / "upper_triangular.2.Q.seed5.alg") == v1);
}

TEST_CASE("argument errors exit 3") {
    CHECK(run_cli({"verify-system"}).code == 3);
    CHECK(run_cli({"unknown-command"}).code == 3);
    CHECK(run_cli({"decide-qh", "-a", "/nonexistent/file.alg"}).code == 3);
}
