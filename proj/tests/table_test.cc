#include "mgate/table.h"

#include <gtest/gtest.h>

#include <cmath>
#include <cstdlib>
#include <limits>

#include "json.hpp"

using namespace mgate;

namespace {

Table sample() {
    Table t;
    t.columns = {"name", "value", "count", "ok"};
    t.add_row({std::string("plain"), 0.1, std::int64_t{3}, true});
    t.add_row({std::string("a,b \"q\""), -2.5e-30, std::int64_t{-1}, false});
    return t;
}

}  // namespace

TEST(Table, RowWidthChecked) {
    Table t;
    t.columns = {"a", "b"};
    EXPECT_THROW(t.add_row({1.0}), std::invalid_argument);
    EXPECT_NO_THROW(t.add_row({1.0, 2.0}));
}

TEST(Table, FormatNames) {
    EXPECT_EQ(parse_table_format("csv"), TableFormat::Csv);
    EXPECT_EQ(parse_table_format("json"), TableFormat::Json);
    EXPECT_FALSE(parse_table_format("xml"));
    EXPECT_STREQ(to_string(TableFormat::Json), "json");
}

TEST(FormatDouble, RoundTrips) {
    for (double v : {0.1, 1.0 / 3, 97.46595551200716, -4.3177336310651266e-06, 1e300, 5e-324}) {
        EXPECT_EQ(std::strtod(format_double(v).c_str(), nullptr), v);
    }
    EXPECT_EQ(format_double(0.1), "0.1");
}

TEST(EmitCsv, QuotingAndLines) {
    std::string csv = emit_table(sample(), TableFormat::Csv);
    EXPECT_EQ(csv,
              "name,value,count,ok\n"
              "plain,0.1,3,true\n"
              "\"a,b \"\"q\"\"\",-2.5e-30,-1,false\n");
}

TEST(EmitCsv, NonFinite) {
    Table t;
    t.columns = {"x"};
    t.add_row({std::numeric_limits<double>::quiet_NaN()});
    t.add_row({std::numeric_limits<double>::infinity()});
    t.add_row({-std::numeric_limits<double>::infinity()});
    EXPECT_EQ(emit_table(t, TableFormat::Csv), "x\nnan\ninf\n-inf\n");
}

TEST(EmitJson, ParsesBackInColumnOrder) {
    std::string text = emit_table(sample(), TableFormat::Json);
    auto j = nlohmann::ordered_json::parse(text);
    ASSERT_EQ(j.size(), 2u);
    std::vector<std::string> keys;
    for (auto it = j[0].begin(); it != j[0].end(); ++it) {
        keys.push_back(it.key());
    }
    EXPECT_EQ(keys, sample().columns);
    EXPECT_EQ(j[1]["name"], "a,b \"q\"");
    EXPECT_EQ(j[1]["value"].get<double>(), -2.5e-30);
    EXPECT_EQ(j[0]["count"].get<int>(), 3);
    EXPECT_EQ(j[0]["ok"].get<bool>(), true);
}

TEST(EmitJson, NonFiniteAsStrings) {
    Table t;
    t.columns = {"x"};
    t.add_row({std::numeric_limits<double>::infinity()});
    auto j = nlohmann::json::parse(emit_table(t, TableFormat::Json));
    EXPECT_EQ(j[0]["x"], "inf");
}

TEST(EmitJson, EmptyTable) {
    Table t;
    t.columns = {"x"};
    EXPECT_EQ(nlohmann::json::parse(emit_table(t, TableFormat::Json)).size(), 0u);
    EXPECT_EQ(emit_table(t, TableFormat::Csv), "x\n");
}
