#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sstream>
#include <vector>

#include "isophote/cli.hpp"
#include "isophote/io.hpp"

using namespace isophote;

namespace {

const std::string kData = ISOPHOTE_DATA_DIR;
const std::string kGolden = ISOPHOTE_GOLDEN_DIR;

struct Run {
  int code;
  std::string out, err;
};

Run invoke(std::vector<std::string> args) {
  args.insert(args.begin(), "isophote");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = cli::main_entry(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string data(const char* name) { return kData + "/" + name; }

Error error_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e;
  }
  FAIL("no error raised");
  return Error(ErrorCode::InputError, "");
}

std::size_t count_lines(const std::string& s) { return static_cast<std::size_t>(std::count(s.begin(), s.end(), '\n')); }

}  // namespace

TEST_CASE("surface files") {
  const auto s = load_surface(data("desitter.srf"));
  CHECK(s->v_domain().periodic);
  CHECK_FALSE(s->u_domain().periodic);
  CHECK(s->v_domain().max == doctest::Approx(2 * M_PI));
  CHECK(std::abs(mdot(s->position(0.3, 1.0), s->position(0.3, 1.0)) - 1) <= 1e-14);

  auto e = error_of([] { parse_surface("x0 = u\nx1 = v\nx2 = sinh(q)\nu = 0 1\nv = 0 1\n", "bad.srf"); });
  CHECK(e.code() == ErrorCode::UnknownIdentifier);
  CHECK(std::string(e.what()).rfind("bad.srf:3:11:", 0) == 0);
  CHECK(e.offset() == 24);

  e = error_of([] { parse_surface("x0 = u\nx1 = v\nx2 = (u\nu = 0 1\nv = 0 1\n", "bad.srf"); });
  CHECK(e.code() == ErrorCode::SyntaxError);
  CHECK(std::string(e.what()).find("(offset 21)") != std::string::npos);

  CHECK(error_of([] { parse_surface("x0 = u\nx1 = v\nu = 0 1\nv = 0 1\n"); }).code() == ErrorCode::InputError);
  CHECK(error_of([] { parse_surface("x0 = u\nx0 = v\n"); }).code() == ErrorCode::SyntaxError);
  CHECK(error_of([] { parse_surface("colour = red\n"); }).code() == ErrorCode::UnknownIdentifier);
  CHECK(error_of([] { parse_surface("x0 = u\nx1 = v\nx2 = t\nu = 0 1\nv = 0 1\n"); }).code() ==
        ErrorCode::InputError);
  CHECK(error_of([] { parse_surface("x0 = u\nx1 = v\nx2 = 0\nu = 1 0\nv = 0 1\n"); }).code() ==
        ErrorCode::InputError);
  CHECK(error_of([] { parse_surface("x0 = u\nx1 = v\nx2 = 0\nu = 0 u\nv = 0 1\n"); }).code() ==
        ErrorCode::InputError);
  CHECK(error_of([] { load_surface("/nonexistent/x.srf"); }).code() == ErrorCode::InputError);
}

TEST_CASE("curve files") {
  const auto c = load_curve(data("latitude05.crv"));
  CHECK(c.kind() == CurveKind::Surface);
  CHECK(c.t_max() == doctest::Approx(2 * M_PI));
  CHECK(c.uv(1.0)[0] == 0.5);
  const auto sp = parse_curve("kind = space\nx0 = 2*t\nx1 = cos(t)\nx2 = sin(t)  # helix\nt = 0 1\n");
  CHECK(sp.kind() == CurveKind::Space);
  CHECK(sp.position(1.0)[0] == 2.0);
  // An explicit surface overrides the file's own reference.
  const auto over = parse_curve("kind = surface\nsurface = missing.srf\nu = t\nv = 0\nt = 0 1\n", "c",
                                load_surface(data("cylinder.srf")));
  CHECK(over.position(0.0)[1] == 1.0);

  CHECK(error_of([] { parse_curve("kind = surface\nu = t\nv = 0\nt = 0 1\n"); }).code() == ErrorCode::InputError);
  CHECK(error_of([] { parse_curve("kind = space\nx0 = u\nx1 = t\nx2 = 0\nt = 0 1\n"); }).code() ==
        ErrorCode::InputError);
  CHECK(error_of([] { parse_curve("kind = space\nx0 = t\nx1 = t\nx2 = 0\nt = 0 1 periodic\n"); }).code() ==
        ErrorCode::InputError);
  CHECK(error_of([] { parse_curve("kind = loop\nt = 0 1\n"); }).code() == ErrorCode::InputError);
  CHECK(error_of([] { parse_curve("kind = space\nx0 = t\nx1 = 0\nx2 = 0\nt = 0 1\nu = t\n"); }).code() ==
        ErrorCode::InputError);
}

TEST_CASE("golden outputs for the documented invocations") {
  auto r = invoke({"extract", "--surface", data("cylinder.srf"), "--axis", "0,0,1", "--c", "0", "--grid", "256", "256"});
  CHECK(r.code == 0);
  CHECK(r.out == read_file(kGolden + "/extract_cylinder.csv"));
  r = invoke({"verify", "--surface", data("desitter.srf"), "--curve", data("latitude05.crv"), "--axis", "1,0,0"});
  CHECK(r.code == 0);
  CHECK(r.out == read_file(kGolden + "/verify_latitude.txt"));
  r = invoke({"extract", "--c", "0", "--angle", "0.5", "--kind", "cosh", "--surface", data("cylinder.srf"), "--axis",
           "0,0,1"});
  CHECK(r.code == 1);
  CHECK(r.out.empty());
  CHECK(r.err == read_file(kGolden + "/extract_conflict.err"));
}

TEST_CASE("repeated runs are byte-identical") {
  for (const char* w : {"1", "3"}) {
    const std::vector<std::string> a = {"extract", "--surface", data("desitter.srf"), "--axis", "0.2,1,0.3",
                                        "--c", "0.4", "--workers", w};
    const auto first = invoke(a);
    CHECK(first.code == 0);
    CHECK(count_lines(first.out) > 10);
    for (int i = 0; i < 3; ++i) CHECK(invoke(a).out == first.out);
  }
  CHECK(invoke({"extract", "--surface", data("desitter.srf"), "--axis", "0.2,1,0.3", "--c", "0.4", "--workers", "1"})
            .out ==
        invoke({"extract", "--surface", data("desitter.srf"), "--axis", "0.2,1,0.3", "--c", "0.4", "--workers", "4"})
            .out);
  const std::vector<std::string> rep = {"report", "--curve", data("helix.crv")};
  const auto first = invoke(rep);
  CHECK(first.code == 0);
  for (int i = 0; i < 3; ++i) CHECK(invoke(rep).out == first.out);
}

TEST_CASE("headers and exit codes") {
  auto r = invoke({"field", "--surface", data("cylinder.srf"), "--axis", "0,0,1", "--grid", "4", "2"});
  CHECK(r.code == 0);
  CHECK(r.out.rfind("u,v,g\n", 0) == 0);
  CHECK(count_lines(r.out) == 1 + 4 * 3);

  r = invoke({"extract", "--surface", data("cylinder.srf"), "--axis", "0,0,1", "--c", "2"});
  CHECK(r.code == 0);
  CHECK(r.out == "component_id,vertex_id,u,v,x0,x1,x2,g\n");

  r = invoke({"extract", "--surface", data("desitter.srf"), "--axis", "1,0,0", "--angle", "0.5", "--kind", "sinh",
           "--format", "tsv"});
  CHECK(r.code == 0);
  CHECK(r.out.rfind("component_id\tvertex_id\tu\tv\tx0\tx1\tx2\tg\n", 0) == 0);

  r = invoke({"frames", "--curve", data("helix.crv"), "--stations", "10"});
  CHECK(r.code == 0);
  CHECK(r.out.rfind("s,x0,x1,x2,T0,T1,T2,B0,B1,B2,N0,N1,N2,k_g,k_n,tau_g,kappa,tau,phi\n", 0) == 0);
  CHECK(count_lines(r.out) == 11);

  r = invoke({"axis", "--curve", data("latitude05.crv")});
  CHECK(r.code == 0);
  CHECK(r.out.rfind("branch,d0,d1,d2,causal,c,residual_const,residual_deriv\n+,", 0) == 0);
  CHECK(r.out.find("\nfit,1,") != std::string::npos);

  r = invoke({"axis", "--curve", data("perturbed.crv"), "--c", "-0.52"});
  CHECK(r.code == 2);

  r = invoke({"verify", "--curve", data("meridian.crv"), "--axis", "0,1,0"});
  CHECK(r.code == 2);
  CHECK(r.out.rfind("FAIL", 0) == 0);

  r = invoke({"report", "--curve", data("latitude05.crv"), "--axis", "1,0,0"});
  CHECK(r.code == 0);
  CHECK(r.out.find("PASS isophote: measured") != std::string::npos);
  CHECK(r.out.find("FAIL geodesic: measured 0.46211715726") != std::string::npos);

  r = invoke({"report", "--curve", data("perturbed.crv"), "--format", "csv"});
  CHECK(r.code == 2);
  CHECK(r.out.rfind("check,status,measured,tolerance,detail\nisophote,FAIL,", 0) == 0);

  r = invoke({"classify", "--surface", data("plane.srf")});
  CHECK(r.code == 2);
  CHECK(r.out.find("\nspacelike,") != std::string::npos);
  CHECK(invoke({"classify", "--surface", data("desitter.srf")}).code == 0);
}

TEST_CASE("diagnostics") {
  auto r = invoke({"frames", "--curve", data("no_such.crv")});
  CHECK(r.code == 1);
  CHECK(r.err.find("no_such.crv: cannot open file") != std::string::npos);
  CHECK(count_lines(r.err) == 1);

  r = invoke({"frames", "--curve", kGolden + "/../bad_curve.crv"});
  CHECK(r.code == 1);
  CHECK(r.err.find("bad_curve.crv:3:10:") != std::string::npos);
  CHECK(r.err.find("(offset ") != std::string::npos);

  r = invoke({"extract", "--surface", data("cylinder.srf"), "--axis", "1,1,0", "--c", "0"});
  CHECK(r.code == 1);
  CHECK(r.err.find("LightlikeInput") != std::string::npos);

  r = invoke({"extract", "--surface", data("cylinder.srf"), "--axis", "0,0,1", "--angle", "0.5"});
  CHECK(r.code == 1);
  r = invoke({"extract", "--surface", data("cylinder.srf"), "--axis", "0,0,1"});
  CHECK(r.code == 1);
  r = invoke({"extract", "--surface", data("cylinder.srf"), "--axis", "0,0", "--c", "0"});
  CHECK(r.code == 1);
  r = invoke({"report", "--curve", data("helix.crv"), "--case", "C9"});
  CHECK(r.code == 1);
  r = invoke({"bogus"});
  CHECK(r.code == 1);
  r = invoke({"--help"});
  CHECK(r.code == 0);
  CHECK(r.out.find("extract") != std::string::npos);
  CHECK(invoke({"report", "--help"}).code == 0);

  CHECK_THROWS_AS(cli::parse_command_line(3, std::vector<const char*>{"isophote", "extract", "--c"}.data()), Error);
}
