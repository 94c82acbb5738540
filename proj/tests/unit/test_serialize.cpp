#include <gtest/gtest.h>

#include <array>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>

#include "sofmdim/errors.hpp"
#include "sofmdim/serialize.hpp"

using namespace sofmdim;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::filesystem::path scratch(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / "sofmdim_serialize_tests";
  std::filesystem::create_directories(dir);
  return dir / name;
}

std::size_t lines(const std::string& s) { return static_cast<std::size_t>(std::count(s.begin(), s.end(), '\n')); }

}  // namespace

TEST(FormatDouble, RoundTripsAndSentinels) {
  EXPECT_EQ(format_double(0.125), "0.125");
  EXPECT_EQ(format_double(-kInf), "-inf");
  EXPECT_EQ(format_double(kInf), "inf");
  for (double v : {0.1, 1.0 / 3.0, 6561.0, 1e-300}) EXPECT_EQ(std::stod(format_double(v)), v);
  EXPECT_EQ(number_from_json(json_number(-kInf)), -kInf);
}

TEST(SpaceJson, RoundTrip) {
  const FinitePseudometricSpace s({{0, 0.5, 1}, {0.5, 0, 0.5}, {1, 0.5, 0}});
  const auto j = space_to_json(s);
  EXPECT_EQ(j.at("n"), 3);
  EXPECT_EQ(space_from_json(j).table(), s.table());
  EXPECT_THROW(space_from_json(nlohmann::json{{"n", 2}, {"dist", {{0, 1}, {2, 0}}}}), InvalidArgument);
}

TEST(SoficJson, RoundTripWithCanonicalElements) {
  const auto z = GroupModel::integers();
  const std::vector<Element> els{z.integer(-1), z.integer(2)};
  const auto sigma = build_folner_sofic(FolnerSet::interval(0, 6), els);
  const auto j = sofic_to_json(sigma);
  EXPECT_EQ(j.at("d"), 6);
  bool saw = false;
  for (const auto& e : j.at("entries")) saw = saw || e.at("element") == "-1";
  EXPECT_TRUE(saw);
  const auto back = sofic_from_json(j, z);
  for (const auto& g : els) EXPECT_EQ(back.image(g), sigma.image(g));

  const auto f = GroupModel::free_rank2();
  SoficApproximation s(f, 3);
  s.set(f.word("abA"), Permutation({1, 2, 0}));
  EXPECT_EQ(sofic_to_json(s).at("entries").back().at("element"), "abA");
}

TEST(SystemJson, RoundTrip) {
  const auto sys = make_random_system(GroupModel::integer_pairs(), 5, 3, MetricStyle::random_ultrametric);
  const auto j = system_to_json(sys);
  EXPECT_EQ(j.at("group"), "integer_pairs");
  EXPECT_TRUE(j.at("generators").contains("(1,0)"));
  const auto back = system_from_json(j);
  EXPECT_EQ(back.generator_maps(), sys.generator_maps());
  EXPECT_EQ(back.space().table(), sys.space().table());
  EXPECT_EQ(back.strict_action(), true);
}

TEST(StageSeriesCsv, MinusInfinityCell) {
  StageSeries s;
  s.stages.push_back({0, 3, 0, Exactness::exact, -kInf});
  s.stages.push_back({1, 4, 16, Exactness::lower_bound, 0.6931471805599453});
  summarize(s, 1.0);
  const auto csv = stage_series_csv(s);
  EXPECT_EQ(csv,
            "stage_index,d,count,exactness,value\n"
            "0,3,0,exact,-inf\n"
            "1,4,16,lower_bound,0.6931471805599453\n");
  EXPECT_EQ(stage_summary_json(s).at("liminf_proxy"), "-inf");
}

TEST(EmitReport, SingleRowAndSorting) {
  std::vector<NumberedReport> one{{0, VerificationReport{"x", {}, {}, {{"ineq", 1, 2, 1, ""}}}}};
  const auto path = scratch("single.csv");
  emit_report(one, ReportFormat::csv, path);
  const auto text = slurp(path);
  EXPECT_EQ(text, "instance_id,inequality_name,lhs,rhs,slack,pass\n0,ineq,1,2,1,true\n");
  EXPECT_FALSE(std::filesystem::exists(path.string() + ".tmp"));

  std::vector<NumberedReport> many;
  for (std::size_t i = 0; i < 1000; ++i) {
    const std::size_t id = (i * 7919) % 1000;
    many.push_back({id, VerificationReport{"x", {}, {}, {{"ineq", 0, static_cast<double>(id), static_cast<double>(id), ""}}}});
  }
  const auto big = render_reports(many, ReportFormat::csv);
  EXPECT_EQ(lines(big), 1001u);
  std::istringstream in(big);
  std::string line;
  std::getline(in, line);
  long prev = -1;
  while (std::getline(in, line)) {
    const long id = std::stol(line.substr(0, line.find(',')));
    EXPECT_GT(id, prev);
    prev = id;
  }

  const auto json = nlohmann::json::parse(render_reports(one, ReportFormat::json));
  EXPECT_EQ(json.at(0).at("checks").at(0).at("pass"), true);
}

TEST(EmitReport, Errors) {
  std::vector<NumberedReport> none;
  EXPECT_THROW(emit_report(none, ReportFormat::csv, scratch("none.csv")), InvalidArgument);
  std::vector<NumberedReport> one{{0, VerificationReport{"x", {}, {}, {{"ineq", 1, 2, 1, ""}}}}};
  EXPECT_THROW(emit_report(one, ReportFormat::csv, "/proc/definitely/not/writable.csv"), Error);
}
