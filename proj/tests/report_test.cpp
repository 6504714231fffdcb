#include "abw/report.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <sstream>

namespace {

using abw::report::format_number;

TEST(Report, FormatNumber)
{
    EXPECT_EQ(format_number(0.0), "0");
    EXPECT_EQ(format_number(-0.0), "0");
    EXPECT_EQ(format_number(1.0), "1");
    EXPECT_EQ(format_number(1.0 / 3.0), "0.333333333333");
    EXPECT_EQ(format_number(7.38905609893065), "7.38905609893");
    EXPECT_EQ(format_number(1.5e-20), "1.5e-20");
    EXPECT_EQ(format_number(std::numeric_limits<double>::infinity()), "inf");
    EXPECT_EQ(format_number(-std::numeric_limits<double>::infinity()), "-inf");
    EXPECT_EQ(format_number(std::nan("")), "nan");
}

TEST(Report, QuoteField)
{
    EXPECT_EQ(abw::report::quote_field("plain"), "plain");
    EXPECT_EQ(abw::report::quote_field("a,b"), "\"a,b\"");
    EXPECT_EQ(abw::report::quote_field("say \"hi\""), "\"say \"\"hi\"\"\"");
    EXPECT_EQ(abw::report::quote_field("two\nlines"), "\"two\nlines\"");
}

TEST(Report, CsvLayout)
{
    abw::report::CsvWriter w({"name", "value"});
    w.add_row({std::string("x,y"), 0.5});
    w.add_row({std::string("z"), 2.0 / 3.0});
    EXPECT_EQ(w.rows(), 2u);
    std::ostringstream out;
    w.write(out);
    EXPECT_EQ(out.str(), "name,value\n\"x,y\",0.5\nz,0.666666666667\n");
}

TEST(Report, CsvRejectsRaggedRows)
{
    abw::report::CsvWriter w({"a", "b"});
    EXPECT_ANY_THROW(w.add_row({1.0}));
}

TEST(Report, SvgIsSelfContained)
{
    abw::report::LinePlot plot;
    plot.title = "density <test> & more";
    plot.x_label = "x";
    plot.y_label = "pdf";
    plot.series.push_back({"one", {0.0, 1.0, 2.0}, {0.0, 1.0, 0.5}, false});
    plot.series.push_back({"two", {0.0, 2.0}, {1.0, 1.0}, true});
    plot.vertical_markers = {1.5};
    const std::string svg = plot.render();
    EXPECT_EQ(svg.rfind("<svg", 0), 0u);
    EXPECT_NE(svg.find("</svg>"), std::string::npos);
    EXPECT_NE(svg.find("&lt;test&gt; &amp; more"), std::string::npos);
    EXPECT_NE(svg.find("polyline"), std::string::npos);
    EXPECT_EQ(svg.find("href"), std::string::npos);
    EXPECT_EQ(plot.render(), svg);
}

TEST(Report, SvgHandlesDegenerateRange)
{
    abw::report::LinePlot plot;
    plot.series.push_back({"flat", {1.0, 1.0}, {2.0, 2.0}, false});
    const std::string svg = plot.render();
    EXPECT_EQ(svg.find("nan"), std::string::npos);
    EXPECT_EQ(svg.find("inf"), std::string::npos);
}

}  // namespace
