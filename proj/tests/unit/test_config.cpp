#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "eqlayer/config.hpp"
#include "eqlayer/errors.hpp"
#include "eqlayer/field.hpp"
#include "eqlayer/report.hpp"
#include "oracles.hpp"

using namespace eqlayer;
namespace fs = std::filesystem;

namespace {

Config parse(const std::string& text, const std::string& dir = ".") {
    std::istringstream is(text);
    return parse_config(is, dir);
}

int error_line(const std::string& text) {
    try {
        parse(text);
    } catch (const ConfigError& e) {
        return e.line();
    }
    return -1;
}

}  // namespace

TEST(Config, ParsesScalarKeys) {
    const Config c = parse("# comment\ncase = II\nH = 3\nYmax = 12 # trailing\nNy = 24\nNz = 12\nzero_order = true\n"
                           "lambda_choice = identity:-2\nseed = 5\n");
    EXPECT_EQ(c.spec.domain.tag, CaseTag::Strip);
    EXPECT_DOUBLE_EQ(c.spec.grid.z_max, 3.0);
    EXPECT_DOUBLE_EQ(c.spec.grid.y_max, 12.0);
    EXPECT_EQ(c.spec.grid.ny, 24);
    EXPECT_TRUE(c.spec.zero_order);
    EXPECT_EQ(c.spec.bc.lambda.kind, LambdaChoice::Kind::ScaledIdentity);
    EXPECT_DOUBLE_EQ(c.spec.bc.lambda.scale, -2.0);
    EXPECT_EQ(c.seed, 5u);
}

TEST(Config, ErrorsCarryLineNumbers) {
    EXPECT_EQ(error_line("case = I\nfoo = 1\n"), 2);
    EXPECT_EQ(error_line("case = I\n\nNy = many\n"), 3);
    EXPECT_EQ(error_line("Ny = 8\nNy = 9\n"), 2);
    EXPECT_EQ(error_line("no equals sign\n"), 1);
    EXPECT_EQ(error_line("case = V\n"), 1);
    EXPECT_EQ(error_line("bump = 1,2,3\n"), 1);
}

TEST(Config, InvalidGeometryIsAConfigError) {
    EXPECT_THROW(parse("case = III\nH = 5\nZmax = 4\n"), ConfigError);
}

TEST(Config, CsvProfilesAndSources) {
    const fs::path dir = fs::temp_directory_path() / "eqlayer_config_test";
    fs::create_directories(dir);
    {
        std::ofstream(dir / "v.csv") << "z,value\n0,0\n1,2\n2,0\n";
        std::ofstream s(dir / "s.csv");
        s << "y,z,value\n";
        for (double y : {0.0, 1.0, 2.0})
            for (double z : {0.0, 1.0}) s << y << ',' << z << ',' << y + 10 * z << '\n';
    }
    const Config c = parse("V = v.csv\ns_psi = s.csv\n", dir.string());
    EXPECT_DOUBLE_EQ(eval(c.spec.bc.V, 0.5), 1.0);
    EXPECT_DOUBLE_EQ(eval(c.spec.bc.V, 5.0), 0.0);
    EXPECT_NEAR(eval(c.spec.s_psi, 1.5, 0.5), 6.5, 1e-14);
    EXPECT_EQ(eval(c.spec.s_psi, 3.0, 0.5), 0.0);
    EXPECT_THROW(parse("V = missing.csv\n", dir.string()), ConfigError);
    fs::remove_all(dir);
}

TEST(Config, DescribeEchoesSettings) {
    const std::string s = describe_spec(parse("case = III\nH = 1\nZmax = 4\n").spec);
    EXPECT_NE(s.find("case=III"), std::string::npos);
    EXPECT_NE(s.find("s_v=zero"), std::string::npos);
}

TEST(FieldsCsv, RoundTrip) {
    DomainCase d;
    d.y_max = 3.0;
    d.z_max = 2.0;
    const StatePair u = oracle::random_state(make_grid(d, 6, 4), 2);
    const fs::path p = fs::temp_directory_path() / "eqlayer_fields_test.csv";
    write_fields_csv(p.string(), u, {{"case", "I"}});
    const StatePair w = read_fields_csv(p.string());
    EXPECT_TRUE(w.grid().same_as(u.grid()));
    EXPECT_EQ(relative_l2(u, w), 0.0);
    std::ifstream is(p);
    std::string line, header;
    while (std::getline(is, line) && line[0] == '#') {
    }
    EXPECT_EQ(line, "y,z,v,psi");
    fs::remove(p);
}

TEST(FieldCheck, RejectsNonFinite) {
    StatePair u(make_grid(DomainCase{}, 8, 8));
    u.v(2, 2) = std::nan("");
    EXPECT_THROW(u.check(), ContractViolation);
}

TEST(Report, KeyValueLayout) {
    DiagnosticsReport r;
    r.at_most("a", 1.0, 2.0);
    r.at_least("b", 1.0, 2.0);
    r.note("c", 3.0);
    std::ostringstream os;
    write_key_values(os, r);
    const std::string s = os.str();
    EXPECT_NE(s.find("a.pass=true"), std::string::npos);
    EXPECT_NE(s.find("b.pass=false"), std::string::npos);
    EXPECT_NE(s.find("c=3"), std::string::npos);
    EXPECT_NE(s.find("all_passed=false"), std::string::npos);
    EXPECT_EQ(r.failures(), std::vector<std::string>{"b"});
}
