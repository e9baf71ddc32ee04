// pbundle command-line front end. Exit codes: 0 success, 1 check failed, 2 bad input.
#include <atomic>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "pbundle/io.hpp"

using namespace pbundle;

namespace {

struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

json read_json(const std::string& path) {
  try {
    return json::parse(read_file(path));
  } catch (const json::exception& e) {
    throw InputError(path + ": " + e.what());
  }
}

std::uint64_t env_seed() {
  const char* s = std::getenv("PBUNDLE_SEED");
  if (!s || !*s) return 0;
  try {
    return std::stoull(s);
  } catch (const std::exception&) {
    throw InputError("PBUNDLE_SEED must be a non-negative integer");
  }
}

// Runs f(i) for i in [0, n) on at most `jobs` threads.
template <class F>
void parallel_for(int n, int jobs, F f) {
  jobs = std::max(1, std::min(jobs, n));
  if (jobs == 1) {
    for (int i = 0; i < n; ++i) f(i);
    return;
  }
  std::atomic<int> next{0};
  std::vector<std::thread> pool;
  for (int t = 0; t < jobs; ++t)
    pool.emplace_back([&] {
      for (int i; (i = next++) < n;) f(i);
    });
  for (auto& th : pool) th.join();
}

void emit(const json& j) { std::cout << j.dump(2) << "\n"; }

int cmd_verify(const std::vector<std::string>& paths, int jobs, bool strict, int samples) {
  std::uint64_t seed = env_seed();
  std::vector<json> out(paths.size());
  std::vector<int> codes(paths.size(), 0);
  parallel_for(static_cast<int>(paths.size()), jobs, [&](int i) {
    json r = {{"input", paths[i]}};
    try {
      auto cand = candidate_from_json(read_json(paths[i]));
      VerifyOptions opt{seed, samples, strict};
      std::visit(
          [&](const auto& c) {
            auto rep = check_compatibility(c, opt);
            r.update(to_json(rep));
            r["field"] = field_to_json(c.curve->field.characteristic());
            codes[i] = rep.passed ? 0 : 1;
          },
          cand);
    } catch (const std::exception& e) {
      r["error"] = e.what();
      codes[i] = 2;
    }
    out[i] = std::move(r);
  });
  emit(out.size() == 1 ? out[0] : json(out));
  return *std::max_element(codes.begin(), codes.end());
}

int cmd_prove(int r, int d, const std::string& descriptor, unsigned long p, const std::string& out_path) {
  std::ostringstream cert;
  json report;
  bool concluded = false;
  if (!descriptor.empty()) {
    auto desc = descriptor_from_json(read_json(descriptor));
    if (d < 2) throw InputError("--degree must be at least 2");
    auto v = nonexistence_verdict(desc, d, p);
    report = to_json(v);
    if (v.proof) cert << certificate_to_jsonl(v.proof->cert);
    concluded = v.kind == Verdict::Kind::nonexistent;
  } else {
    if (r < 1 || d < 2) throw InputError("need --rank >= 1 and --degree >= 2");
    auto casc = run_cascade(r, d, p, CascadeMode::scheduled);
    auto proof = conclude_common_zero(r, d, p);
    cert << certificate_to_jsonl(casc) << certificate_to_jsonl(proof.cert);
    json zs = json::array();
    for (const auto& z : casc.zeros()) zs.push_back(exponent_to_string(z.exp));
    auto fam = vanishing_family(r, d);
    int covered = 0;
    for (const auto& u : fam)
      for (const auto& z : casc.zeros())
        if (z.exp == u) {
          ++covered;
          break;
        }
    report = {{"r", r},
              {"d", d},
              {"field", field_to_json(p)},
              {"cascade_zeros", zs},
              {"family_size", fam.size()},
              {"family_covered", covered},
              {"common_zero_established", proof.established},
              {"common_zero_mode", proof.mode},
              {"common_zero_point", exponent_to_string(proof.point)}};
    concluded = proof.established;
  }
  report["nonexistence_concluded"] = concluded;
  if (out_path.empty()) {
    std::cout << cert.str();
    std::cerr << report.dump() << "\n";
  } else {
    std::ofstream f(out_path);
    if (!f) throw InputError("cannot write " + out_path);
    f << cert.str();
    report["certificate"] = out_path;
    emit(report);
  }
  return concluded ? 0 : 1;
}

int cmd_verify_certificate(const std::string& path, int jobs) {
  std::vector<VanishingCertificate> certs;
  try {
    certs = certificates_from_jsonl(read_file(path));
  } catch (const InputError&) {
    throw;
  } catch (const std::exception& e) {
    emit({{"input", path}, {"valid", false}, {"error", e.what()}});
    return 1;
  }
  std::vector<json> out(certs.size());
  std::vector<int> ok(certs.size(), 0);
  parallel_for(static_cast<int>(certs.size()), jobs, [&](int i) {
    auto res = replay(certs[i]);
    ok[i] = res.ok;
    out[i] = {{"system", certs[i].system == SystemKind::cascade ? "cascade" : "chain"},
              {"r", certs[i].r},
              {"d", certs[i].d},
              {"valid", res.ok},
              {"zeros", res.zeros.size()}};
    if (!res.ok) out[i]["error"] = res.error;
  });
  bool all = !certs.empty() && std::all_of(ok.begin(), ok.end(), [](int v) { return v != 0; });
  emit({{"input", path}, {"valid", all}, {"sections", out}});
  return all ? 0 : 1;
}

int cmd_sym(int r, int d, const std::string& mono, const std::string& poly, unsigned long p, const std::string& lam) {
  if (r < 1 || d < 1) throw InputError("need --rank >= 1 and --degree >= 1");
  json out;
  if (!mono.empty()) {
    Exponent u;
    std::stringstream ss(mono);
    for (std::string tok; std::getline(ss, tok, ',');) u.push_back(std::stoi(tok));
    if (static_cast<int>(u.size()) != r + 1 || exponent_degree(u) != d)
      throw InputError("--monomial must have r+1 entries summing to d");
    json terms = json::array();
    for (const auto& v : monomials(r + 1, d))
      if (auto w = whichcoeffs(u, v))
        terms.push_back({{"a", exponent_to_string(v)}, {"coeff", w->coeff.get_str()}, {"omega_power", w->power}});
    out["monomial"] = exponent_to_string(u);
    out["expansion"] = terms;
  }
  if (!poly.empty()) {
    auto run = [&](auto field) {
      auto c = make_curve(field, field.parse(lam));
      auto f = parse_homog(c, poly, r + 1, d);
      auto image = sym_action(atiyah_matrix(c, r + 1), f);
      out["input"] = to_string(f);
      out["image"] = to_string(image);
    };
    if (p == 0) run(QField());
    else run(FpField(static_cast<std::uint32_t>(p)));
  }
  if (mono.empty() && poly.empty()) {
    json dec = sym_decompose(r + 1, d);
    out["decomposition"] = dec;
  }
  emit(out);
  return 0;
}

int cmd_dyn(const std::string& path, long d) {
  auto lat = lattice_from_json(read_json(path));
  auto v = check_degree_bound(lat, d);
  json out = {{"input", path}, {"degree", d}, {"check", to_json(v)}};
  if (lat.lambda1_g) out["report"] = to_json(dyn_report(lat, static_cast<int>(d)));
  emit(out);
  return v.confirmed && v.tir_consistent ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact checks for endomorphisms of projective bundles over elliptic curves"};
  app.require_subcommand(1, 1);
  int jobs = 1;
  app.add_option("--jobs", jobs, "Worker threads for batch sub-tasks")->check(CLI::PositiveNumber);

  auto* verify = app.add_subcommand("verify", "Check a candidate endomorphism");
  std::vector<std::string> vpaths;
  bool strict = false;
  int samples = 64;
  verify->add_option("input", vpaths, "Candidate JSON files")->required();
  verify->add_flag("--strict", strict, "Require a proof that the F_i have no common zero");
  verify->add_option("--samples", samples, "Sampled fibres for the common-zero fallback");

  auto* prove = app.add_subcommand("prove", "Run the vanishing cascade and the common-zero argument");
  int rank = 0, degree = 0;
  unsigned long prime = 0;
  std::string descriptor, out_path;
  prove->add_option("--rank", rank, "Index r of the last coordinate t_r");
  prove->add_option("--degree", degree, "Fibre degree d")->required();
  prove->add_option("--descriptor", descriptor, "Bundle descriptor JSON");
  prove->add_option("--field", prime, "Characteristic (0 for Q)");
  prove->add_option("--out", out_path, "Write the certificate here");

  auto* decompose = app.add_subcommand("decompose", "Decompose Atiyah tensor or symmetric powers");
  std::vector<int> tensor, symv;
  decompose->add_option("--tensor", tensor, "r s")->expected(2);
  decompose->add_option("--sym", symv, "r d")->expected(2);

  auto* sym = app.add_subcommand("sym", "Symmetric-power action of the Atiyah transition matrix");
  std::string mono, poly, lam = "2";
  unsigned long sym_prime = 0;
  int sym_rank = 0, sym_degree = 0;
  sym->add_option("--rank", sym_rank, "Index r of the last coordinate t_r")->required();
  sym->add_option("--degree", sym_degree, "Degree d")->required();
  sym->add_option("--monomial", mono, "Comma-separated exponent u: expand [t^u] in the a_v");
  sym->add_option("--poly", poly, "Homogeneous polynomial to transform");
  sym->add_option("--field", sym_prime, "Characteristic (0 for Q)");
  sym->add_option("--lambda", lam, "Legendre parameter");

  auto* dyn = app.add_subcommand("dyn", "Spectral radius and degree bound on a Picard lattice");
  std::string lattice;
  long dyn_degree = 1;
  dyn->add_option("input", lattice, "Lattice JSON")->required();
  dyn->add_option("--degree", dyn_degree, "Fibre degree d")->required();

  auto* vcert = app.add_subcommand("verify-certificate", "Replay a vanishing certificate");
  std::string cert_path;
  vcert->add_option("input", cert_path, "Certificate JSONL")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*verify) return cmd_verify(vpaths, jobs, strict, samples);
    if (*prove) return cmd_prove(rank, degree, descriptor, prime, out_path);
    if (*decompose) {
      if (tensor.empty() == symv.empty()) throw InputError("give exactly one of --tensor or --sym");
      const auto& a = tensor.empty() ? symv : tensor;
      if (a[0] < 1 || a[1] < 1) throw InputError("parameters must be positive");
      json out = tensor.empty() ? sym_decompose(a[0], a[1]) : atiyah_tensor(a[0], a[1]);
      std::cout << out.dump() << "\n";
      return 0;
    }
    if (*sym) return cmd_sym(sym_rank, sym_degree, mono, poly, sym_prime, lam);
    if (*dyn) return cmd_dyn(lattice, dyn_degree);
    if (*vcert) return cmd_verify_certificate(cert_path, jobs);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
