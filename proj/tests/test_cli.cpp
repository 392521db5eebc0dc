#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "levmap/impact.hpp"
#include "levmap/kelly.hpp"
#include "levmap/levy.hpp"
#include "levmap/option.hpp"
#include "subprocess.hpp"

using testutil::run_cmd;

namespace {

const std::string kBin = "\"" LEVMAP_CLI_BIN "\"";

std::string quiet(const std::string& args) { return kBin + " " + args + " 2>/dev/null"; }

std::vector<std::string> lines_of(const std::string& text) {
    std::vector<std::string> lines;
    std::stringstream ss(text);
    std::string line;
    while (std::getline(ss, line)) lines.push_back(line);
    return lines;
}

// value of the given column in the given data row of a headed CSV
double csv_cell(const std::string& csv, std::size_t row, std::size_t col) {
    const auto rows = lines_of(csv);
    REQUIRE(rows.size() > row + 1);
    std::stringstream ss(rows[row + 1]);
    std::string field;
    for (std::size_t i = 0; i <= col; ++i) std::getline(ss, field, ',');
    return std::stod(field);
}

std::string write_temp(const std::string& name, const std::string& content) {
    const std::string path = name;
    std::ofstream out(path, std::ios::binary);
    out << content;
    return path;
}

}  // namespace

TEST_CASE("cli: leverage matches the library and prints bare JSON") {
    const auto r = run_cmd(quiet("leverage --lambda 0.2 --sigma 0.4"));
    CHECK(r.exit_code == 0);
    CHECK(r.out == "{\"leverage\":0.5}\n");
}

TEST_CASE("cli: leverage with a Levy model") {
    const auto r = run_cmd(quiet("leverage --model jump-diffusion --m 1 --lambda 0.2 --sigma 0.4"));
    CHECK(r.exit_code == 0);
    const double expected =
        levmap::glm_optimal_leverage(levmap::jump_diffusion_model(1.0), 0.2, 0.4);
    char wanted[64];
    std::snprintf(wanted, sizeof(wanted), "%.12g", expected);
    CHECK(r.out.find(std::string("\"leverage\":") + wanted) != std::string::npos);
}

TEST_CASE("cli: missing required flag exits 2") {
    CHECK(run_cmd(quiet("leverage --lambda 0.2")).exit_code == 2);
    CHECK(run_cmd(quiet("leverage")).exit_code == 2);
}

TEST_CASE("cli: invalid numeric input exits 2") {
    CHECK(run_cmd(quiet("leverage --lambda 0.2 --sigma -1")).exit_code == 2);
    CHECK(run_cmd(quiet("simulate --gamma 0")).exit_code == 2);
}

TEST_CASE("cli: simulate default trajectory ends in underflow") {
    const auto r = run_cmd(quiet("simulate"));
    CHECK(r.exit_code == 0);
    const auto rows = lines_of(r.out);
    CHECK(rows.front() == "step,x,dtheta,S,V,halt_reason");
    CHECK(rows.back().find("underflow") != std::string::npos);
    // matches the library trajectory value for value
    const levmap::Trajectory t =
        levmap::simulate(levmap::frozen_map(2.0, {0.5, 1.0}, 1.0), 0.5, 100);
    CHECK(rows.size() == t.points.size() + 1);
    CHECK(csv_cell(r.out, 1, 1) == doctest::Approx(t.points[1].x).epsilon(1e-12));
}

TEST_CASE("cli: simulate with x0 = 0 emits a single fixed-point row") {
    const auto r = run_cmd(quiet("simulate --x0 0"));
    CHECK(r.exit_code == 0);
    const auto rows = lines_of(r.out);
    CHECK(rows.size() == 2);
    CHECK(rows[1].rfind("0,0,", 0) == 0);
}

TEST_CASE("cli: full mode evolves V, frozen mode does not") {
    const auto full = run_cmd(quiet("simulate --mode full --r 0.01 --x0 0.01 --steps 5"));
    CHECK(full.exit_code == 0);
    CHECK(csv_cell(full.out, 1, 4) != csv_cell(full.out, 0, 4));

    const auto frozen = run_cmd(quiet("simulate --x0 0.01 --steps 5"));
    CHECK(frozen.exit_code == 0);
    CHECK(csv_cell(frozen.out, 1, 4) == csv_cell(frozen.out, 0, 4));
}

TEST_CASE("cli: frozen-only and full-only flags are rejected crosswise") {
    CHECK(run_cmd(quiet("simulate --mode full --A 2")).exit_code == 2);
    CHECK(run_cmd(quiet("simulate --r 0.01")).exit_code == 2);
    CHECK(run_cmd(quiet("simulate --mode sideways")).exit_code == 2);
}

TEST_CASE("cli: sweep output is byte-identical across runs") {
    const std::string base = "cli_sweep_det";
    const std::string args =
        " sweep --lambda-res 21 --gamma-res 21 --csv " + base + "%d.csv --svg " + base +
        "%d.svg";
    for (int i = 1; i <= 2; ++i) {
        char cmd[512];
        std::snprintf(cmd, sizeof(cmd), (kBin + args + " 2>/dev/null").c_str(), i, i);
        CHECK(run_cmd(cmd).exit_code == 0);
    }
    for (const char* ext : {".csv", ".svg"}) {
        std::ifstream a(base + "1" + ext, std::ios::binary);
        std::ifstream b(base + "2" + ext, std::ios::binary);
        REQUIRE(a);
        REQUIRE(b);
        std::stringstream sa, sb;
        sa << a.rdbuf();
        sb << b.rdbuf();
        CHECK(sa.str() == sb.str());
        CHECK(!sa.str().empty());
    }
    for (const char* f : {"1.csv", "2.csv", "1.svg", "2.svg"}) {
        std::remove((base + f).c_str());
    }
}

TEST_CASE("cli: single-cell sweep equals classify") {
    const auto r = run_cmd(quiet(
        "sweep --lambda-min 2 --lambda-max 2 --lambda-res 1 --gamma-min 0.5 "
        "--gamma-max 0.5 --gamma-res 1 --x0 0.5"));
    CHECK(r.exit_code == 0);
    const auto rows = lines_of(r.out);
    REQUIRE(rows.size() == 2);
    CHECK(rows[1] == "2,0.5,II");
}

TEST_CASE("cli: option-match --atm") {
    const auto r = run_cmd(quiet("option-match --atm --lambda 0.4 --sigma 0.2"));
    CHECK(r.exit_code == 0);
    const levmap::AtmSolution sol = levmap::atm_match(0.4, 0.2);
    char wanted[64];
    std::snprintf(wanted, sizeof(wanted), "%.12g", sol.sigma_root_tau);
    CHECK(r.out.find(std::string("\"sigma_root_tau\":") + wanted) != std::string::npos);
    CHECK(r.out.find("0.8614") != std::string::npos);
}

TEST_CASE("cli: option-match with no solution prints null and exits 0") {
    const auto atm = run_cmd(quiet("option-match --atm --lambda 0.2 --sigma 0.2"));
    CHECK(atm.exit_code == 0);
    CHECK(atm.out == "{\"solution\":null}\n");
    const auto general = run_cmd(quiet("option-match --lambda 0.1 --sigma 0.2"));
    CHECK(general.exit_code == 0);
    CHECK(general.out == "{\"solution\":null}\n");
}

TEST_CASE("cli: option-match general emits the matched pair") {
    const auto r = run_cmd(quiet("option-match --lambda 0.4 --sigma 0.2 --S 100"));
    CHECK(r.exit_code == 0);
    CHECK(r.out.find("\"K\":100") != std::string::npos);
    CHECK(r.out.find("\"tau\":") != std::string::npos);
    CHECK(r.out.find("\"resid_stock\":") != std::string::npos);
}

TEST_CASE("cli: detect round trip through simulate") {
    const auto r = run_cmd(kBin + " simulate --x0 0.9 2>/dev/null | " + kBin +
                           " detect 2>/dev/null");
    CHECK(r.exit_code == 0);
    CHECK(r.out == "II,SELL_GAMMA\n");
}

TEST_CASE("cli: detect inconclusive cases") {
    const std::string short_csv = write_temp("cli_detect_short.csv", "x\n0.1\n0.05\n");
    const auto brief = run_cmd(quiet("detect --input " + short_csv));
    CHECK(brief.exit_code == 0);
    CHECK(brief.out == "inconclusive,NONE\n");
    std::remove(short_csv.c_str());

    const std::string zero_csv = write_temp(
        "cli_detect_zero.csv", "x\n0.1\n0.05\n0\n0.0125\n0.006\n0.003\n0.0015\n0.0008\n");
    const auto zero = run_cmd(quiet("detect --input " + zero_csv));
    CHECK(zero.exit_code == 0);
    CHECK(zero.out == "inconclusive,NONE\n");
    std::remove(zero_csv.c_str());
}

TEST_CASE("cli: detect reads headerless single-column input") {
    const std::string csv = write_temp(
        "cli_detect_plain.csv", "0.64\n0.32\n0.16\n0.08\n0.04\n0.02\n0.01\n0.005\n");
    const auto r = run_cmd(quiet("detect --input " + csv));
    CHECK(r.exit_code == 0);
    CHECK(r.out == "II,SELL_GAMMA\n");
    std::remove(csv.c_str());
}

TEST_CASE("cli: config file supplies defaults, flags override") {
    const std::string cfg = write_temp("cli_cfg.json", "{\"lambda\":0.2,\"sigma\":0.4}");
    const auto base = run_cmd(quiet("leverage --config " + cfg));
    CHECK(base.exit_code == 0);
    CHECK(base.out == "{\"leverage\":0.5}\n");
    const auto overridden = run_cmd(quiet("leverage --config " + cfg + " --lambda 0.3"));
    CHECK(overridden.exit_code == 0);
    CHECK(overridden.out == "{\"leverage\":0.75}\n");
    std::remove(cfg.c_str());
}

TEST_CASE("cli: malformed or unknown config exits 2") {
    const std::string bad = write_temp("cli_cfg_bad.json", "{\"lambda\":");
    CHECK(run_cmd(quiet("leverage --config " + bad)).exit_code == 2);
    std::remove(bad.c_str());
    const std::string unknown = write_temp("cli_cfg_unknown.json",
                                           "{\"lambda\":0.2,\"sigma\":0.4,\"vol\":1}");
    CHECK(run_cmd(quiet("leverage --config " + unknown)).exit_code == 2);
    std::remove(unknown.c_str());
    CHECK(run_cmd(quiet("leverage --config does_not_exist.json")).exit_code == 2);
}
