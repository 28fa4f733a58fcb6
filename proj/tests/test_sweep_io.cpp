#include <doctest.h>

#include <cmath>
#include <string>

#include "combsense/csv.hpp"
#include "combsense/errors.hpp"
#include "combsense/sweep_io.hpp"

using namespace combsense;

namespace {

const char* meta_text = R"({
  "lambda": 0.5,
  "tau1": 3,
  "tau2": 3,
  "alpha_sq": 1,
  "variance": 1,
  "probe_gamma": null
})";

} // namespace

TEST_CASE("number formatting round-trips")
{
    for (double v : {0.1, 1.0 / 3.0, 6.02214076e23, -2.5e-300, 0.0}) {
        CHECK(std::stod(csv::format_number(v)) == v);
    }
    CHECK(csv::format_number(std::nan("")) == "nan");
    CHECK(csv::format_number(0.1) == "0.10000000000000001");
}

TEST_CASE("numeric CSV parsing reports line numbers")
{
    const auto t = csv::parse_numeric("# comment\na,b\n\n1,2\n3, 4\n", 2);
    CHECK(t.header == std::vector<std::string>{"a", "b"});
    CHECK(t.rows.size() == 2);
    CHECK(t.line_numbers == std::vector<std::size_t>{4, 5});
    try {
        csv::parse_numeric("a,b\n1,2\n3\n", 2);
        FAIL("expected a parse error");
    } catch (const ParseError& e) {
        CHECK(e.line() == 3);
    }
    try {
        csv::parse_numeric("a,b\n1,2\n3,x4\n", 2);
        FAIL("expected a parse error");
    } catch (const ParseError& e) {
        CHECK(e.line() == 3);
    }
    CHECK_THROWS_AS(csv::parse_numeric("", 2), ParseError);
}

TEST_CASE("sweep meta sidecar")
{
    const auto meta = parse_sweep_meta(meta_text);
    CHECK(meta.lambda == 0.5);
    CHECK_FALSE(meta.probe_gamma.has_value());
    const auto again = parse_sweep_meta(sweep_meta_json(meta));
    CHECK(again.tau2 == 3.0);
    CHECK_FALSE(again.probe_gamma.has_value());

    SweepMeta with_probe = meta;
    with_probe.probe_gamma = 0.05;
    CHECK(parse_sweep_meta(sweep_meta_json(with_probe)).probe_gamma == 0.05);

    CHECK_THROWS_AS(parse_sweep_meta(R"({"lambda": 0.5})"), ParseError);
    CHECK_THROWS_AS(parse_sweep_meta(R"({"lambda": 0.5, "tau1": 3, "tau2": 3, "alpha_sq": 1,
                                       "variance": 1, "extra": 2})"),
                    ParseError);
    CHECK_THROWS_AS(parse_sweep_meta(R"({"lambda": "x", "tau1": 3, "tau2": 3, "alpha_sq": 1, "variance": 1})"),
                    ParseError);
    try {
        parse_sweep_meta("{\n  \"lambda\": 0.5,\n  oops\n}");
        FAIL("expected a parse error");
    } catch (const ParseError& e) {
        CHECK(e.line() == 3);
    }
}

TEST_CASE("sweep CSV round trip")
{
    DelaySweep sweep;
    sweep.meta = parse_sweep_meta(meta_text);
    sweep.delays = {1e-3, 0.1, 1.0 / 3.0, 10.0};
    sweep.visibility = {0.2, 0.3, 0.7, 0.9999999999999999};
    const auto back = parse_sweep(sweep_csv(sweep), sweep_meta_json(sweep.meta));
    CHECK(back.delays == sweep.delays);
    CHECK(back.visibility == sweep.visibility);

    try {
        parse_sweep("delay_tau0,visibility\n0.1,0.5\n0.2,abc\n", meta_text);
        FAIL("expected a parse error");
    } catch (const ParseError& e) {
        CHECK(e.line() == 3);
    }
    try {
        parse_sweep("delay_tau0,visibility\n0.1,0.5\n0.05,0.4\n", meta_text);
        FAIL("expected a parse error");
    } catch (const ParseError& e) {
        CHECK(e.line() == 3);
    }
    CHECK_THROWS_AS(parse_sweep("delay_tau0,visibility\n", meta_text), InsufficientDataError);
    CHECK(sidecar_path("data/run.csv") == std::filesystem::path("data/run.json"));
}

TEST_CASE("kernel and spectrum files carry their headers")
{
    KernelEstimate est;
    est.delays = {1.0, 2.0};
    est.k_hat = {0.5, std::nan("")};
    est.status = {PointStatus::ok, PointStatus::invalid_visibility};
    const auto k = kernel_csv(est);
    CHECK(k.find("flagged_points=1") != std::string::npos);
    CHECK(k.find("2,nan,invalid_visibility") != std::string::npos);

    SpectrumEstimate spec;
    spec.omegas = {2.0 * M_PI};
    spec.s_nn = {-0.25};
    spec.ir_cutoff = 1e-4;
    spec.uv_cutoff = 1e3;
    spec.negative_count = 1;
    const auto s = spectrum_csv(spec);
    CHECK(s.find("ir_cutoff_rad_per_tau0=0.0001") != std::string::npos);
    CHECK(s.find("normalized=false") != std::string::npos);
    CHECK(s.find("negative_values=1") != std::string::npos);
    CHECK(s.find("\n1,6.2831853071795862,-0.25\n") != std::string::npos);
}
