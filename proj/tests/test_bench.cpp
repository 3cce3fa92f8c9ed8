#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "nosas/errors.hpp"
#include "nosas/experiment.hpp"
#include "nosas/report.hpp"
#include "nosas/tables.hpp"

using namespace nosas;
namespace fs = std::filesystem;

namespace {

fs::path scratch_dir(const std::string& name)
{
    const fs::path d = fs::temp_directory_path() / ("nosas_test_" + name);
    fs::remove_all(d);
    fs::create_directories(d);
    return d;
}

int count_lines(const std::string& s)
{
    int n = 0;
    for (char c : s) n += c == '\n';
    return n;
}

TableOptions table_options()
{
    TableOptions o;
    o.reference_dir = NOSAS_REFERENCE_DIR;
    o.threads = 1;
    return o;
}

} // namespace

TEST_SUITE("bench")
{
    TEST_CASE("config validation")
    {
        ExperimentConfig c;
        CHECK_NOTHROW(c.validate());
        c.cells = 0;
        CHECK_THROWS_AS(c.validate(), InvalidParameter);
        c = ExperimentConfig{};
        c.rtol = 1.0;
        CHECK_THROWS_AS(c.validate(), InvalidParameter);
        c = ExperimentConfig{};
        c.coarse.c = 0.0;
        CHECK_THROWS_AS(c.validate(), InvalidParameter);
        c = ExperimentConfig{};
        c.max_iter = 0;
        CHECK_THROWS_AS(run_experiment(c), InvalidParameter);
    }

    TEST_CASE("settings from key=value and JSON text")
    {
        const auto kv = parse_config_text("# sample\nsubdomains = 2\ncells=4\npattern=channel\nkind=diagonal\nc=0.64\n");
        ExperimentConfig a;
        apply_settings(a, kv);
        CHECK(a.subdomains == 2);
        CHECK(a.cells == 4);
        CHECK(a.pattern.variant == Pattern::channel);
        CHECK(a.coarse.kind == CoarseKind::nosas_diagonal);
        CHECK(a.coarse.c == doctest::Approx(0.64));

        const auto js = parse_config_text(R"({"subdomains": 3, "cells": 6, "verify": true, "rtol": 1e-8})");
        ExperimentConfig b;
        apply_settings(b, js);
        CHECK(b.subdomains == 3);
        CHECK(b.cells == 6);
        CHECK(b.verify);
        CHECK(b.rtol == doctest::Approx(1e-8));

        // later settings override earlier ones
        auto merged = kv;
        merged["cells"] = "8";
        ExperimentConfig m;
        apply_settings(m, merged);
        CHECK(m.cells == 8);

        CHECK_THROWS_AS(parse_config_text("cells 4\n"), InvalidParameter);
        ExperimentConfig e;
        CHECK_THROWS_AS(apply_settings(e, {{"colour", "red"}}), InvalidParameter);
        CHECK_THROWS_AS(apply_settings(e, {{"cells", "many"}}), InvalidParameter);
        CHECK_THROWS_AS(apply_settings(e, {{"pattern", "marble"}}), InvalidParameter);
        CHECK_THROWS_AS(read_config_file("/nonexistent/nosas.cfg"), InvalidParameter);
    }

    TEST_CASE("config file round trip")
    {
        const fs::path d = scratch_dir("config");
        const fs::path p = d / "run.json";
        ExperimentConfig c;
        c.subdomains = 2;
        c.cells = 8;
        c.pattern = default_pattern(Pattern::inclusion_grid);
        c.coarse = {CoarseKind::mes, 1.3};
        write_file_atomic(p.string(), config_to_json(c));
        ExperimentConfig back;
        apply_settings(back, read_config_file(p.string()));
        CHECK(back.subdomains == 2);
        CHECK(back.cells == 8);
        CHECK(back.pattern.variant == Pattern::inclusion_grid);
        CHECK(back.coarse.kind == CoarseKind::mes);
        CHECK(back.coarse.c == doctest::Approx(1.3));
    }

    TEST_CASE("atomic write leaves no temporary file")
    {
        const fs::path d = scratch_dir("atomic");
        const fs::path p = d / "out.json";
        write_file_atomic(p.string(), "first");
        write_file_atomic(p.string(), "second");
        std::ifstream in(p);
        std::stringstream ss;
        ss << in.rdbuf();
        CHECK(ss.str() == "second");
        CHECK_FALSE(fs::exists(d / "out.json.tmp"));
        CHECK_THROWS(write_file_atomic((d / "missing" / "x.json").string(), "x"));
    }

    TEST_CASE("harmonic run and report round trip")
    {
        ExperimentConfig c;
        c.subdomains = 3;
        c.cells = 4;
        c.coarse = {CoarseKind::harmonic, 1.0};
        c.verify = true;
        c.spectra = true;
        c.threads = 1;
        const ExperimentReport r = run_experiment(c);
        CHECK(r.converged);
        CHECK(r.iterations == 1);
        REQUIRE(r.verify_cond);
        CHECK(*r.verify_cond == doctest::Approx(1.0).epsilon(1e-8));
        CHECK(r.timings.total > 0.0);

        const std::string text = report_to_json(r);
        CHECK(text.find("\"schema\"") != std::string::npos);
        CHECK(text.find(report_schema) != std::string::npos);
        const ExperimentReport back = report_from_json(text);
        CHECK(report_to_json(back) == text);
        CHECK(back.iterations == r.iterations);
        CHECK(back.config.coarse.kind == CoarseKind::harmonic);

        CHECK_THROWS_AS(report_from_json("{not json"), FormatError);
        CHECK_THROWS_AS(report_from_json(R"({"schema": "other/9"})"), FormatError);
    }

    TEST_CASE("exact NOSAS run keeps spectra and kept counts")
    {
        ExperimentConfig c;
        c.pattern = default_pattern(Pattern::inclusion_grid);
        c.spectra = true;
        c.threads = 1;
        const ExperimentReport r = run_experiment(c);
        CHECK(r.coarse_dim == 84);
        CHECK(r.kept.size() == 16);
        CHECK(r.spectra.size() == 16);
        CHECK(r.cond_estimate == doctest::Approx(4.76).epsilon(0.02));
        CHECK(r.cond_estimate <= r.theoretical_upper);
        const ExperimentReport back = report_from_json(report_to_json(r));
        CHECK(back.spectra == r.spectra);
        CHECK(back.kept == r.kept);
    }

    TEST_CASE("spectrum dump")
    {
        ExperimentConfig c;
        c.threads = 1;
        const std::string all = dump_spectrum(c, "classes");
        CHECK(all.rfind("subdomain,class,variant,index,lambda,log10_lambda\n", 0) == 0);
        for (const char* cls : {",corner,", ",edge,", ",floating,"}) CHECK(all.find(cls) != std::string::npos);
        for (const char* v : {",exact,", ",block,", ",diagonal,"}) CHECK(all.find(v) != std::string::npos);
        // floating subdomain: first exact eigenvalue is zero
        CHECK(all.find("5,floating,exact,1,0,-inf") != std::string::npos);

        const std::string one = dump_spectrum(c, "5");
        CHECK(count_lines(one) == 1 + 3 * 32);
        CHECK_THROWS_AS(dump_spectrum(c, "16"), InvalidParameter);
        CHECK_THROWS_AS(dump_spectrum(c, "x"), InvalidParameter);

        c.subdomains = 1;
        CHECK(count_lines(dump_spectrum(c, "classes")) == 1);
    }

    TEST_CASE("reference files and comparison modes")
    {
        const fs::path d = scratch_dir("refs");
        {
            std::ofstream out(d / "TX.csv");
            out << "# test\nlabel,reference,tolerance,mode\n"
                << "a,10,0,exact\nb,100,0.05,rel\nc,1,0.01,abs\nd,1e-6,3,factor\ne,50,0.1,stretch\nf,7,0,info\n";
        }
        const TableResult ok = compare_with_reference(
            "TX", {{"a", 10.2}, {"b", 104}, {"c", 1.009}, {"d", 2.9e-6}, {"e", 80}, {"f", 1}, {"g", 3}}, d.string());
        CHECK(ok.pass());
        CHECK_FALSE(ok.find("e")->pass);
        CHECK_FALSE(ok.find("e")->counted());
        CHECK_FALSE(ok.find("g")->has_reference);
        const TableResult bad = compare_with_reference("TX", {{"a", 11}, {"d", 4e-6}}, d.string());
        CHECK_FALSE(bad.pass());
        CHECK_FALSE(bad.find("a")->pass);
        CHECK_FALSE(bad.find("d")->pass);
        CHECK(bad.format().find("TX: FAIL") != std::string::npos);
        CHECK(count_lines(ok.to_csv()) == 8);

        {
            std::ofstream out(d / "TY.csv");
            out << "label,reference,tolerance,mode\nonly,two\n";
        }
        CHECK_THROWS_AS(load_reference((d / "TY.csv").string()), FormatError);
        CHECK_THROWS_AS(load_reference((d / "TZ.csv").string()), InvalidParameter);
    }

    TEST_CASE("table reproduction")
    {
        TableOptions o = table_options();
        CHECK(table_ids().size() == 7);
        CHECK_THROWS_AS(reproduce_table("T9", o), InvalidParameter);
        CHECK_THROWS_AS(reproduce_table("T7", o), InvalidParameter);

        const TableResult t2 = reproduce_table("T2", o);
        CHECK(t2.pass());
        REQUIRE(t2.find("H/h=8 exact lambda2"));
        CHECK(t2.find("H/h=8 exact lambda2")->measured == doctest::Approx(0.1548).epsilon(0.01));
    }

    TEST_CASE("T7 on a synthetic raster")
    {
        const fs::path d = scratch_dir("raster");
        const fs::path p = d / "perm.csv";
        {
            std::ofstream out(p);
            for (int j = 0; j < 8; ++j) {
                for (int i = 0; i < 8; ++i) out << (i > 0 ? "," : "") << ((i + 2 * j) % 5 == 0 ? 1e4 : 1.0);
                out << '\n';
            }
        }
        TableOptions o = table_options();
        o.raster = p.string();
        o.subdomains = 2;
        CHECK_THROWS_AS(reproduce_table("T7", o), InvalidParameter);
        o.cells = 4;
        const TableResult t7 = reproduce_table("T7", o);
        CHECK(t7.rows.size() == 9);
        REQUIRE(t7.find("raster c=0.25 coarse_dim"));
        CHECK(t7.find("raster c=0.25 iterations")->measured > 0);
        o.cells = 5;
        CHECK_THROWS_AS(reproduce_table("T7", o), FormatError);
    }
}
