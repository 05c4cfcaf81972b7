#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include "homfem/experiment.hpp"

using namespace homfem;

namespace {

std::string write_temp(const std::string& content) {
    static int counter = 0;
    const std::string path =
        (std::filesystem::temp_directory_path() /
         ("homfem_cfg_" + std::to_string(counter++) + ".txt"))
            .string();
    std::ofstream out(path);
    out << content;
    return path;
}

std::vector<CaseResult> table_rows(const std::vector<double>& err2) {
    const int cells[] = {4, 8, 16, 32};
    const double err1[] = {0.17981, 0.18118, 0.18116, 0.18186};
    std::vector<CaseResult> rows;
    for (int i = 0; i < 4; ++i) {
        CaseResult r;
        r.N = cells[i];
        r.eps = 1.0 / cells[i];
        r.h = r.eps / 32;
        r.err1 = err1[i];
        r.err2 = err2[i];
        rows.push_back(r);
    }
    return rows;
}

}  // namespace

TEST_CASE("config files parse with comments and strict keys") {
    const std::string path = write_temp(
        "# reference case\n"
        "layout = cross_full\n"
        "E0 = 117.0\n"
        "nu0 = 0.43\n"
        "N = 8   # cells\n"
        "M = 64\n"
        "HT = 0.002\n"
        "out = results\n");
    const ExperimentConfig cfg = parse_config_file(path);
    CHECK(cfg.layout == CellLayout::cross_full);
    CHECK(cfg.N == 8);
    CHECK(cfg.M == 64);
    CHECK(cfg.HT == doctest::Approx(0.002));
    CHECK(cfg.out == "results");
    CHECK(cfg.eps() == doctest::Approx(0.125));
    CHECK(cfg.mesh_n() == 64);

    // overlay semantics: untouched keys keep the base values
    ExperimentConfig base;
    base.cellres = 32;
    const ExperimentConfig overlaid =
        parse_config_file(write_temp("N = 16\n"), base);
    CHECK(overlaid.cellres == 32);
    CHECK(overlaid.N == 16);

    CHECK_THROWS_AS(parse_config_file(write_temp("bogus_key = 1\n")), ConfigError);
    CHECK_THROWS_AS(parse_config_file(write_temp("N 4\n")), ConfigError);
    CHECK_THROWS_AS(parse_config_file(write_temp("N = four\n")), ConfigError);
    CHECK_THROWS_AS(parse_config_file("/no/such/file"), ConfigError);

    try {
        parse_config_file(write_temp("N = 4\nwhat = 1\n"));
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        CHECK(std::string(e.what()).find(":2") != std::string::npos);
    }
}

TEST_CASE("rate fit reproduces the reference-table slopes") {
    // published err2 column of the inset configuration
    const std::vector<double> eps{0.25, 0.125, 0.0625, 0.03125};
    const double r =
        fit_rate(eps, {0.05691, 0.04087, 0.02897, 0.02043});
    CHECK(r == doctest::Approx(0.49305).epsilon(5e-4));

    // exact first-order decay
    CHECK(fit_rate(eps, {0.4, 0.2, 0.1, 0.05}) == doctest::Approx(1.0));

    // full-cross column decays like sqrt(2) per halving
    const std::vector<double> full{0.08512, 0.06018, 0.04240, 0.02987};
    for (int i = 0; i + 1 < 4; ++i)
        CHECK(full[i] / full[i + 1] ==
              doctest::Approx(std::sqrt(2.0)).epsilon(0.05));

    CHECK_THROWS_AS(fit_rate({0.5}, {0.1}), std::invalid_argument);
}

TEST_CASE("sweep verdict logic") {
    const SweepReport good =
        evaluate_rows(table_rows({0.05691, 0.04087, 0.02897, 0.02043}), 0.1);
    CHECK(good.pass);
    CHECK(good.plateau_ratio == doctest::Approx(1.0114).epsilon(1e-3));

    const SweepReport bad = evaluate_rows(table_rows({0.4, 0.2, 0.1, 0.05}), 0.1);
    CHECK(!bad.pass);
    CHECK(bad.rate == doctest::Approx(1.0));

    CHECK_THROWS_AS(evaluate_rows({table_rows({1, 1, 1, 1})[0]}, 0.1),
                    std::invalid_argument);
}

TEST_CASE("report files are byte-stable") {
    const auto rows = table_rows({0.05691, 0.04087, 0.02897, 0.02043});
    const std::string csv = report_csv(rows);
    CHECK(csv ==
          "N,eps,h,err1,err2\n"
          "4,0.25000,0.00781,0.17981,0.05691\n"
          "8,0.12500,0.00391,0.18118,0.04087\n"
          "16,0.06250,0.00195,0.18116,0.02897\n"
          "32,0.03125,0.00098,0.18186,0.02043\n");
    const SweepReport rep = evaluate_rows(rows, 0.1);
    const std::string rates = rates_txt(rep);
    CHECK(rates.find("verdict = PASS") != std::string::npos);
    CHECK(csv == report_csv(rows));  // second render identical
}

TEST_CASE("error metrics are invariant under load scaling") {
    ExperimentConfig base;
    base.N = 2;
    base.cellres = 4;
    base.M = 4;
    const CaseResult one = run_case(base);

    ExperimentConfig scaled = base;
    scaled.f2 *= 10.0;
    scaled.trac_a *= 10.0;
    scaled.trac_b *= 10.0;
    scaled.HT *= 10.0;
    const CaseResult ten = run_case(scaled);

    CHECK(std::fabs(one.err1 - ten.err1) <= 1e-6 * one.err1);
    CHECK(std::fabs(one.err2 - ten.err2) <= 1e-6 * one.err2);
}

TEST_CASE("run_case is deterministic") {
    ExperimentConfig cfg;
    cfg.layout = CellLayout::cross_inset;
    cfg.N = 2;
    cfg.cellres = 4;
    cfg.M = 2;
    const CaseResult a = run_case(cfg);
    const CaseResult b = run_case(cfg);
    CHECK(a.err1 == b.err1);
    CHECK(a.err2 == b.err2);
    CHECK(report_csv({a}) == report_csv({b}));
}
