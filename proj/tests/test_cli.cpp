#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "uhf/cli.hpp"
#include "uhf/witness.hpp"

using namespace uhf;

namespace {

std::string read_document(const std::string& name) {
  std::ifstream in(std::string(UHF_DOCUMENTS_DIR) + "/" + name);
  REQUIRE(in);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

RunResult run(const std::string& name, const std::string& command, std::map<std::string, std::string> overrides = {}) {
  return run_document(read_document(name), RunOptions{command, std::move(overrides)});
}

std::vector<std::vector<std::string>> rows(const std::string& csv) {
  std::vector<std::vector<std::string>> out;
  std::stringstream s(csv);
  std::string line;
  std::getline(s, line);
  while (std::getline(s, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::vector<std::string> cells;
    std::stringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    out.push_back(cells);
  }
  return out;
}

void check_position(const std::string& text, std::size_t line, std::size_t column) {
  try {
    ActionSpecDocument::parse(text);
    FAIL("parse succeeded");
  } catch (const DocumentError& e) {
    CHECK(e.line() == line);
    CHECK(e.column() == column);
  }
}

const char* kHeader = "[group]\ntype = cyclic\nn = 2\n[action]\nconstructor = regular\n";

}  // namespace

TEST_CASE("document parsing") {
  const auto doc = ActionSpecDocument::parse(std::string(kHeader) + "# note\n[task]\nkind = certify  # trailing\nl_max = 3\n");
  CHECK(doc.group.get("type", "") == "cyclic");
  REQUIRE(doc.tasks.size() == 1);
  CHECK(doc.tasks[0].get("kind", "") == "certify");
  CHECK(doc.tasks[0].find("l_max")->line == 9);
  CHECK(doc.tasks[0].find("l_max")->column == 9);
  CHECK(doc.factors.name.empty());

  check_position("[group]\ntype = cyclic\n[gruop]\n", 3, 2);
  check_position("[group]\n  type cyclic\n", 2, 3);
  check_position("type = cyclic\n", 1, 1);
  check_position("[group]\ntype = cyclic\ntype = symmetric\n", 3, 1);
  check_position("[group]\ntype = cyclic\n[group]\n", 3, 1);
  check_position("[group]\nty pe = cyclic\n", 2, 3);
  check_position(std::string(kHeader) + "[task]\nkind = draw\n", 7, 8);
  check_position("[action]\nconstructor = regular\n", 1, 1);
  check_position("[group]\ntype = cyclic\n", 1, 1);
}

TEST_CASE("matrix literals") {
  const Unitary x = parse_matrix_literal("[0, 1; 1, 0]");
  CHECK(x.is_exact());
  CHECK(x.monomial().perm == std::vector<std::size_t>{1, 0});

  const Unitary d = parse_matrix_literal("diag(1, ph(1/3), -1, -i)");
  REQUIRE(d.is_exact());
  CHECK(d.monomial().phase == std::vector<Rational>{Rational(0), Rational(1, 3), Rational(1, 2), Rational(3, 4)});
  CHECK(parse_matrix_literal("diag(ph(-1/3))").monomial().phase[0] == Rational(2, 3));
  CHECK(parse_matrix_literal("diag(ph(7/3))").monomial().phase[0] == Rational(1, 3));

  const Unitary p = parse_matrix_literal("perm(2, 0, 1)");
  CHECK(p.is_exact());
  CHECK(p.monomial().perm == std::vector<std::size_t>{2, 0, 1});
  CHECK(parse_matrix_literal("id(4)").is_identity());

  const Unitary r = parse_matrix_literal("[0.6, 0.8i; 0.8i, 0.6]");
  CHECK(!r.is_exact());
  CHECK(std::abs(r.dense()(0, 1) - Complex(0, 0.8)) == 0.0);
  const Unitary s = parse_matrix_literal("[0.6+0.8i, 0; 0, 1e-1-0.99498743710661997i]");
  CHECK(std::abs(s.dense()(1, 1) - Complex(0.1, -0.99498743710661997)) == 0.0);

  auto column_of = [](const std::string& text) {
    try {
      parse_matrix_literal(text);
    } catch (const DocumentError& e) {
      return e.column();
    }
    return std::size_t{0};
  };
  CHECK(column_of("[1, 0; 0, 2]") == 1);
  CHECK(column_of("[1, 0; 0, x]") == 11);
  CHECK(column_of("[1, 0, 0; 0, 1]") == 1);
  CHECK(column_of("diag(1, ph(1/0))") == 9);
  CHECK(column_of("rot(1)") == 1);
}

TEST_CASE("elements") {
  const GroupSpec s3(FiniteGroup::symmetric(3));
  CHECK(parse_element(s3, "(1 2 3)") == s3.element(3));
  CHECK(parse_element(s3, " 5 ") == s3.element(5));
  CHECK_THROWS_AS(parse_element(s3, "6"), Error);
  CHECK_THROWS_AS(parse_element(s3, "(1 4)"), Error);

  const GroupSpec ab(AbelianGroup::from_orders({2, 3}));
  CHECK(parse_element(ab, "g0+g1") == Element{{1, 1}});
  CHECK(parse_element(ab, "1, 2") == Element{{1, 2}});
  CHECK(parse_element(ab, "2g1") == Element{{0, 2}});
  CHECK(parse_element(ab, "0") == ab.identity());
  CHECK_THROWS_AS(parse_element(ab, "g2"), Error);
  CHECK_THROWS_AS(parse_element(ab, "1"), Error);
}

TEST_CASE("groups, factors and actions from documents") {
  const auto table = ActionSpecDocument::parse(
      "[group]\ntype = table\nrows = 0 1 2; 1 2 0; 2 0 1\nlabels = e, a, b\n[action]\nconstructor = regular\n");
  const GroupSpec g = build_group(table.group);
  CHECK(g.table().order() == 3);
  CHECK(g.describe(g.element(1)) == "a");

  const auto bad = ActionSpecDocument::parse("[group]\ntype = table\nrows = 0 1; 1 1\n[action]\nconstructor = regular\n");
  CHECK_THROWS_AS(build_group(bad.group), DocumentError);

  const auto prod = ActionSpecDocument::parse("[group]\ntype = product\nfactors = cyclic 2, symmetric 3\n[action]\nconstructor = regular\n");
  CHECK(build_group(prod.group).table().order() == 12);

  const auto f = ActionSpecDocument::parse(
      std::string(kHeader) + "[factors]\npattern = periodic\nhead = 2\nperiod = 3, 5\n");
  const auto seq = build_factors(f.factors);
  REQUIRE(seq);
  CHECK(seq->head(4) == std::vector<std::int64_t>{2, 3, 5, 3});

  const auto ex = ActionSpecDocument::parse(
      "[group]\ntype = cyclic\nn = 3\n[action]\nconstructor = explicit\nperiod.0.1 = diag(1, ph(1/3))\n"
      "period.0.2 = diag(1, ph(2/3))\nhead.0.1 = perm(1, 2, 0)\nhead.0.2 = perm(2, 0, 1)\n");
  const auto a = build_action(ex, build_group(ex.group));
  CHECK(a.factors().head(3) == std::vector<std::int64_t>{3, 2, 2});
  CHECK(a.factor_defect(0) == 0.0);

  const auto missing = ActionSpecDocument::parse(
      "[group]\ntype = cyclic\nn = 3\n[action]\nconstructor = explicit\nperiod.0.1 = diag(1, ph(1/3))\n");
  CHECK_THROWS_AS(build_action(missing, build_group(missing.group)), DocumentError);
  const auto broken = ActionSpecDocument::parse(
      "[group]\ntype = cyclic\nn = 2\n[action]\nconstructor = explicit\nperiod.0.1 = diag(1, i)\n");
  CHECK_THROWS_AS(build_action(broken, build_group(broken.group)), DocumentError);
}

TEST_CASE("certify golden document") {
  const auto r = run("z2_regular.uhf", "certify");
  CHECK(r.exit_code == kExitPass);
  const auto table = rows(r.csv);
  REQUIRE(table.size() == 4);
  for (const auto& row : table) {
    CHECK(row[3] == "0");
    CHECK(row[4] == "0");
    CHECK(row[5] == "0");
    CHECK(row[7] == "PASS");
  }
  CHECK(r.csv.rfind("stage,block_size,tower_length,ortho_defect,shift_defect,trace_defect,epsilon,pass\n", 0) == 0);
  REQUIRE(r.plan);
  CHECK(r.plan->find("\"verdict\": \"PASS\"") != std::string::npos);
}

TEST_CASE("flow witness document") {
  const auto r = run("flow_cycle.uhf", "witness");
  CHECK(r.exit_code == kExitPass);
  const auto table = rows(r.csv);
  REQUIRE(table.size() == 64);
  for (const auto& row : table) {
    const auto n = std::stoll(row[0]);
    const Complex tau(std::strtod(row[1].c_str(), nullptr), std::strtod(row[2].c_str(), nullptr));
    CHECK(std::abs(tau - flow_trace(n, std::sqrt(2.0), 0.5)) <= 1e-12);
  }
  const auto displayed = run("flow_cycle.uhf", "witness", {{"formula", "displayed"}});
  CHECK(displayed.exit_code == kExitFail);
  const auto odd_only = run("flow_cycle.uhf", "witness", {{"formula", "displayed"}, {"theta", "1"}});
  CHECK(odd_only.exit_code == kExitPass);
}

TEST_CASE("input errors exit 2") {
  const auto r = run("malformed_table.uhf", "info");
  CHECK(r.exit_code == kExitInput);
  CHECK(r.report.find("line 4, column 8") != std::string::npos);
  CHECK(r.csv.empty());

  CHECK(run("z2_regular.uhf", "certify", {{"colour", "red"}}).exit_code == kExitInput);
  CHECK(run("z2_regular.uhf", "certify", {{"element", "2"}}).exit_code == kExitInput);
  CHECK(run("z2_regular.uhf", "certify", {{"l_max", "0"}}).exit_code == kExitInput);
  CHECK(run("z2_regular.uhf", "bump-up").exit_code == kExitInput);
  CHECK(run("z2_regular.uhf", "draw").exit_code == kExitInput);
  CHECK(run_document("[group]\n", RunOptions{"info", {}}).exit_code == kExitInput);
}

TEST_CASE("subcommands") {
  CHECK(run("z2_regular.uhf", "info").exit_code == kExitPass);
  CHECK(run("z2_regular.uhf", "evaluate", {{"stage", "2"}}).csv == "row,col,re,im\n0,3,1,0\n1,2,1,0\n2,1,1,0\n3,0,1,0\n");
  CHECK(run("z2_regular.uhf", "tower", {{"end", "3"}}).exit_code == kExitPass);
  CHECK(run("z2_regular.uhf", "certify", {{"rule", "1/2, 1/4, 1/8, 1/16"}}).exit_code == kExitPass);
  CHECK(run("z2_regular.uhf", "certify", {{"k", "3"}}).exit_code == kExitInput);
  CHECK(run("sign3.uhf", "certify", {{"block_cap", "1"}, {"l_max", "3"}}).exit_code == kExitFail);
  CHECK(run("sign3.uhf", "certify", {{"l_max", "3"}}).exit_code == kExitPass);
  CHECK(run("z2_regular.uhf", "witness").exit_code == kExitPass);
  CHECK(run("z2_sign_cut.uhf", "cut-down").exit_code == kExitPass);
  CHECK(run("z2_bump_3inf.uhf", "bump-up").exit_code == kExitPass);
  CHECK(run("z2_bump_3inf.uhf", "construct").exit_code == kExitPass);
  CHECK(run("z2_bump_3inf.uhf", "construct", {{"route", "rokhlin"}}).exit_code == kExitPass);
  CHECK(run("s3_extend.uhf", "induce").exit_code == kExitPass);
  CHECK(run("s3_extend.uhf", "extend").exit_code == kExitPass);
  CHECK(run("s3_extend.uhf", "crossed").exit_code == kExitPass);
  const auto simplex = run("sign3.uhf", "simplex");
  CHECK(simplex.exit_code == kExitPass);
  CHECK(simplex.report.find("collapse") != std::string::npos);
  CHECK(simplex.csv.find("# verdict=collapse") != std::string::npos);

  const auto bump = run("z2_bump_3inf.uhf", "bump-up");
  REQUIRE(bump.plan);
  CHECK(bump.plan->find("\"Q\": 4") != std::string::npos);
  CHECK(bump.plan->find("\"r\": 1") != std::string::npos);
  const auto cut = run("z2_sign_cut.uhf", "cut-down");
  CHECK(cut.plan->find("\"selected\"") != std::string::npos);
  const auto ext = run("s3_extend.uhf", "extend");
  CHECK(ext.plan->find("\"coset_representatives\"") != std::string::npos);
}

TEST_CASE("runs are deterministic and replayable") {
  for (const auto& [doc, cmd] : std::vector<std::pair<std::string, std::string>>{
           {"z2_bump_3inf.uhf", "construct"}, {"s3_extend.uhf", "crossed"}, {"flow_cycle.uhf", "witness"}}) {
    const auto a = run(doc, cmd);
    const auto b = run(doc, cmd);
    CHECK(a.csv == b.csv);
    CHECK(*a.plan == *b.plan);
    CHECK(a.plan->find("\"parameters\"") != std::string::npos);
  }
  const auto first = run("z2_regular.uhf", "certify", {{"l_max", "3"}});
  const std::string plan = *first.plan;
  const auto doc_at = plan.find("\"document\": \"");
  REQUIRE(doc_at != std::string::npos);
  const auto replay = run_document(read_document("z2_regular.uhf"), RunOptions{"certify", {{"l_max", "3"}}});
  CHECK(replay.csv == first.csv);
}
