// dcat: command-line driver over .dcat workspaces.

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "dcat/corpus.hpp"
#include "dcat/dsl.hpp"
#include "dcat/kan.hpp"
#include "dcat/laws.hpp"
#include "dcat/spanfin.hpp"
#include "dcat/tab.hpp"

using json = nlohmann::ordered_json;

namespace {

enum Exit { kOk = 0, kNegative = 1, kUsage = 2, kInternal = 3 };

class UsageError : public dcat::Error {
 public:
  using dcat::Error::Error;
};

struct Global {
  std::string format = "text";
  std::size_t probe_max_objects = 2;
  bool quiet = false;
};

struct Report {
  std::string command;
  bool ok = true;
  json findings = json::object();
};

void flatten(const json& j, const std::string& prefix, std::ostream& out) {
  if (j.is_object()) {
    for (const auto& [k, v] : j.items()) flatten(v, prefix.empty() ? k : prefix + "." + k, out);
    return;
  }
  if (j.is_array() && std::all_of(j.begin(), j.end(), [](const json& x) { return x.is_primitive(); })) {
    out << prefix << ":";
    for (const auto& x : j) out << " " << (x.is_string() ? x.get<std::string>() : x.dump());
    out << "\n";
    return;
  }
  if (j.is_array()) {
    for (std::size_t i = 0; i < j.size(); ++i) flatten(j[i], prefix + "[" + std::to_string(i) + "]", out);
    return;
  }
  out << prefix << ": " << (j.is_string() ? j.get<std::string>() : j.dump()) << "\n";
}

std::string render(const Report& r, double seconds, const std::string& format) {
  json j;
  j["command"] = r.command;
  j["ok"] = r.ok;
  j["findings"] = r.findings;
  j["seconds"] = seconds;
  if (format == "json") return j.dump(2) + "\n";
  std::ostringstream out;
  out << "command: " << r.command << "\n";
  out << "ok: " << (r.ok ? "true" : "false") << "\n";
  flatten(r.findings, "", out);
  out << "seconds: " << seconds << "\n";
  return out.str();
}

// --- lookups -------------------------------------------------------------------

const dcat::Functor& functor(const dcat::dsl::Workspace& w, const std::string& name) {
  const auto* e = w.find_functor(name);
  if (!e) throw UsageError("unknown functor " + name);
  return e->value;
}

const dcat::ProfPtr& profunctor(const dcat::dsl::Workspace& w, const std::string& name) {
  const auto* e = w.find_profunctor(name);
  if (!e) throw UsageError("unknown profunctor " + name);
  return e->value;
}

const dcat::Cell& cell(const dcat::dsl::Workspace& w, const std::string& name) {
  const auto* e = w.find_cell(name);
  if (!e) throw UsageError("unknown cell " + name);
  return e->value;
}

json functor_json(const dcat::Functor& f) {
  json j = json::object();
  json objs = json::object();
  for (std::size_t x = 0; x < f.source->num_objects(); ++x) {
    objs[f.source->object_name(static_cast<dcat::ObjectId>(x))] =
        f.target->object_name(f.obj(static_cast<dcat::ObjectId>(x)));
  }
  json arrs = json::object();
  for (std::size_t u = 0; u < f.source->num_arrows(); ++u) {
    const auto id = static_cast<dcat::ArrowId>(u);
    if (f.source->is_identity(id)) continue;
    arrs[f.source->arrow(id).name] = f.target->arrow(f.arr(id)).name;
  }
  j["objects"] = objs;
  j["arrows"] = arrs;
  return j;
}

json cell_json(const dcat::Cell& c) {
  json j = json::object();
  for (std::size_t x = 0; x < c.map.size(); ++x) {
    j[c.source->element(static_cast<dcat::ElemId>(x)).name] = c.target->element(c.map[x]).name;
  }
  return j;
}

std::vector<std::string> object_names(const dcat::FinCategory& c) { return c.objects(); }

// --- commands --------------------------------------------------------------------

Report check(const std::string& file) {
  const auto w = dcat::dsl::parse_file(file);
  Report r{"check " + file};
  r.findings["categories"] = w.categories.size();
  r.findings["functors"] = w.functors.size();
  r.findings["profunctors"] = w.profunctors.size();
  r.findings["cells"] = w.cells.size();
  return r;
}

Report compose(const std::string& file, const std::vector<std::string>& names, bool witness) {
  const auto w = dcat::dsl::parse_file(file);
  if (names.size() != 2) throw UsageError("--prof takes two profunctors J,H");
  const auto& j = profunctor(w, names[0]);
  const auto& h = profunctor(w, names[1]);
  const auto c = dcat::compose_prof(j, h);
  Report r{"compose " + file + " --prof " + names[0] + "," + names[1] +
           (witness ? " --witness" : "")};
  r.findings["source"] = c.prof->source()->name();
  r.findings["target"] = c.prof->target()->name();
  r.findings["size"] = c.prof->num_elements();
  json elems = json::array();
  for (std::size_t x = 0; x < c.prof->num_elements(); ++x) {
    const auto& e = c.prof->element(static_cast<dcat::ElemId>(x));
    json el;
    el["name"] = e.name;
    el["from"] = c.prof->source()->object_name(e.a);
    el["to"] = c.prof->target()->object_name(e.b);
    if (witness) {
      json members = json::array();
      for (std::size_t a = 0; a < j->num_elements(); ++a) {
        for (std::size_t b = 0; b < h->num_elements(); ++b) {
          if (c.cls(static_cast<dcat::ElemId>(a), static_cast<dcat::ElemId>(b)) ==
              static_cast<dcat::ElemId>(x)) {
            members.push_back(j->element(static_cast<dcat::ElemId>(a)).name + "|" +
                              h->element(static_cast<dcat::ElemId>(b)).name);
          }
        }
      }
      el["class"] = members;
    }
    elems.push_back(el);
  }
  r.findings["elements"] = elems;
  return r;
}

Report ran(const std::string& file, const std::string& along, const std::string& of,
           bool pointwise, const std::string& counit) {
  const auto w = dcat::dsl::parse_file(file);
  const auto& j = profunctor(w, along);
  const auto& d = functor(w, of);
  Report r{"ran " + file + " --along " + along + " --of " + of + (pointwise ? " --pointwise" : "") +
           (counit.empty() ? "" : " --counit " + counit)};
  dcat::RanCandidate cand;
  if (!counit.empty()) {
    const auto& eps = cell(w, counit);
    cand = dcat::RanCandidate{j, d, eps.left, eps};
    const auto v = dcat::validate_candidate(cand);
    if (!v.ok()) throw UsageError("cell " + counit + ": " + v.violations.front());
  } else {
    try {
      cand = dcat::pointwise_ran(j, d);
    } catch (const dcat::NoLimit& e) {
      r.ok = false;
      r.findings["witness"] = e.what();
      return r;
    }
  }
  std::vector<std::string> lines;
  for (std::size_t x = 0; x < j->source()->num_objects(); ++x) {
    const auto a = static_cast<dcat::ObjectId>(x);
    lines.push_back("r(" + j->source()->object_name(a) + ")=" +
                    d.target->object_name(cand.extension.obj(a)));
  }
  const auto rep = dcat::analyse_ran(cand);
  r.findings["r"] = lines;
  r.findings["extension"] = functor_json(cand.extension);
  r.findings["counit"] = cell_json(cand.counit);
  json k;
  k["ordinary"] = rep.ordinary;
  k["pointwise_rhom"] = rep.pointwise_rhom;
  k["pointwise_limits"] = rep.pointwise_limits;
  k["test_cells"] = rep.test_cells;
  if (rep.witness) {
    k["witness"] = "test cell through " + rep.witness->s.name + " has " +
                   std::to_string(rep.witness->factorizations) + " factorisations";
  }
  if (rep.failing_object) {
    k["failing_object"] = j->source()->object_name(*rep.failing_object);
  }
  r.findings["kan"] = k;
  r.ok = rep.ordinary && (!pointwise || rep.pointwise_rhom);
  if (!rep.ordinary) {
    r.findings["witness"] = k.contains("witness") ? k["witness"].get<std::string>()
                                                  : std::string("not a right Kan extension");
  } else if (!r.ok) {
    r.findings["witness"] =
        "not pointwise" + (rep.failing_object ? " at object " + k["failing_object"].get<std::string>()
                                              : std::string());
  }
  return r;
}

Report exact(const std::string& file, const std::string& name, const std::string& mode,
             const Global& g) {
  const auto w = dcat::dsl::parse_file(file);
  const auto& phi = cell(w, name);
  Report r{"exact " + file + " --cell " + name + " --mode " + mode};
  if (mode == "bc") {
    r.ok = dcat::beck_chevalley(phi);
    r.findings["beck_chevalley"] = r.ok;
    if (!r.ok) r.findings["witness"] = "the factorisation phi_* is not invertible";
    return r;
  }
  const auto probes = dcat::probe_categories(g.probe_max_objects);
  const auto rep = dcat::is_right_exact(phi, dcat::ExactMode::pointwise, probes);
  r.ok = rep.exact;
  r.findings["pointwise_right_exact"] = rep.exact;
  r.findings["extensions_checked"] = rep.extensions_checked;
  r.findings["scope"] = "verified over probe set of " + std::to_string(probes.size()) + " categories";
  if (!rep.exact) r.findings["witness"] = rep.witness;
  return r;
}

Report initial(const std::string& file, const std::string& name) {
  const auto w = dcat::dsl::parse_file(file);
  const auto& g = functor(w, name);
  const auto rep = dcat::is_initial_functor(g);
  Report r{"initial " + file + " --functor " + name};
  r.ok = rep.initial;
  r.findings["initial"] = rep.initial;
  r.findings["opcartesian"] = rep.opcartesian;
  r.findings["star_invertible"] = rep.star_invertible;
  if (!rep.initial) r.findings["witness"] = rep.witness;
  return r;
}

std::vector<dcat::CatPtr> default_probes() {
  return {dcat::one_category(), dcat::two_category(), dcat::parallel_pair()};
}

Report tabulate(const std::string& file, const std::string& name, bool verify,
                std::optional<std::size_t> probes) {
  const auto w = dcat::dsl::parse_file(file);
  const auto& j = profunctor(w, name);
  const auto t = dcat::tabulate(j);
  Report r{"tabulate " + file + " --prof " + name + (verify ? " --verify" : "")};
  r.findings["objects"] = object_names(*t.total);
  r.findings["arrows"] = t.total->num_arrows();
  r.findings["opcartesian"] = dcat::is_opcartesian_tabulation(t);
  r.ok = r.findings["opcartesian"].get<bool>();
  if (verify) {
    const auto ps = probes ? dcat::probe_categories(*probes) : default_probes();
    const auto rep = dcat::verify_tabulation(t, ps);
    json v;
    v["one_dimensional"] = rep.one_dimensional;
    v["two_dimensional"] = rep.two_dimensional;
    v["cells_one"] = rep.cells_one;
    v["cells_two"] = rep.cells_two;
    v["scope"] = "verified over probe set of " + std::to_string(ps.size()) + " categories";
    if (!rep.ok()) v["witness"] = rep.witness;
    r.findings["verification"] = v;
    r.ok = r.ok && rep.ok();
  }
  return r;
}

Report comma(const std::string& file, const std::string& left, const std::string& right) {
  const auto w = dcat::dsl::parse_file(file);
  const auto& f = functor(w, left);
  const auto& g = functor(w, right);
  const auto co = dcat::comma_object(f, g);
  const auto direct = dcat::comma_category(f, g);
  Report r{"comma " + file + " --left " + left + " --right " + right};
  r.findings["objects"] = object_names(*direct.category);
  r.findings["arrows"] = direct.category->num_arrows();
  r.findings["tabulation_objects"] = co.tabulation.total->num_objects();
  r.ok = dcat::is_isomorphism(co.comparison);
  r.findings["isomorphic"] = r.ok;
  return r;
}

Report internal_tabulate(const std::string& file, const std::string& name, bool verify) {
  const auto w = dcat::dsl::parse_file(file);
  const auto& j = profunctor(w, name);
  const auto ij = dcat::span::from_prof(j);
  const auto t = dcat::span::internal_tabulate(ij);
  Report r{"internal-tabulate " + file + " --prof " + name + (verify ? " --verify" : "")};
  r.findings["objects"] = t.total->object_names;
  r.findings["arrows"] = t.total->num_arrows();
  const bool iso =
      dcat::find_isomorphism(dcat::span::to_fincat(*t.total), dcat::tabulate(j).total).has_value();
  r.findings["matches_tabulation"] = iso;
  r.ok = iso;
  if (verify) {
    const auto rep = dcat::span::verify_internal_tabulation(t);
    json v;
    v["valid"] = rep.valid;
    v["one_dimensional"] = rep.one_dimensional;
    v["two_dimensional"] = rep.two_dimensional;
    v["opcartesian"] = rep.opcartesian;
    v["checked_one"] = rep.checked_one;
    v["checked_two"] = rep.checked_two;
    v["checked_opcartesian"] = rep.checked_opcartesian;
    if (!rep.ok()) v["witness"] = rep.witness;
    r.findings["verification"] = v;
    r.ok = r.ok && rep.ok();
  }
  return r;
}

Report laws(std::size_t max_objects, std::uint64_t seed, std::size_t fuzz, const Global& g) {
  dcat::laws::Config cfg;
  cfg.max_objects = max_objects;
  cfg.seed = seed;
  cfg.fuzz_cases = fuzz;
  cfg.probe_max_objects = g.probe_max_objects;
  Report r{"laws --corpus-max-objects " + std::to_string(max_objects) + " --seed " +
           std::to_string(seed)};
  json list = json::array();
  for (const auto& res : dcat::laws::run_all(cfg)) {
    json c;
    c["id"] = res.id;
    c["title"] = res.title;
    c["passed"] = res.passed;
    c["checked"] = res.checked;
    c["failures"] = res.failures;
    if (!res.witness.empty()) c["witness"] = res.witness;
    if (!res.note.empty()) c["note"] = res.note;
    c["seconds"] = res.seconds;
    if (!g.quiet) {
      std::cerr << "criterion " << res.id << ": " << (res.passed ? "PASS" : "FAIL") << "\n";
    }
    r.ok = r.ok && res.passed;
    list.push_back(c);
  }
  r.findings["criteria"] = list;
  return r;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"dcat: finite double-categorical computations"};
  app.require_subcommand(1);
  app.fallthrough();
  Global g;
  app.add_option("--format", g.format, "json or text")->check(CLI::IsMember({"json", "text"}));
  app.add_option("--probe-max-objects", g.probe_max_objects, "objects of probe categories");
  app.add_flag("--quiet", g.quiet, "no report on standard output");

  std::string file;
  std::function<Report()> run;

  auto* c_check = app.add_subcommand("check", "parse and validate a workspace");
  c_check->add_option("file", file)->required();
  c_check->callback([&] { run = [&] { return check(file); }; });

  std::vector<std::string> pair;
  bool witness = false;
  auto* c_compose = app.add_subcommand("compose", "coend composite of two profunctors");
  c_compose->add_option("file", file)->required();
  c_compose->add_option("--prof", pair, "J,H")->delimiter(',')->required();
  c_compose->add_flag("--witness", witness, "list the pairs of each class");
  c_compose->callback([&] { run = [&] { return compose(file, pair, witness); }; });

  std::string along, of;
  bool pointwise = false;
  std::string counit;
  auto* c_ran = app.add_subcommand("ran", "pointwise right Kan extension");
  c_ran->add_option("file", file)->required();
  c_ran->add_option("--along", along)->required();
  c_ran->add_option("--of", of)->required();
  c_ran->add_flag("--pointwise", pointwise);
  c_ran->add_option("--counit", counit, "analyse this cell instead of the computed one");
  c_ran->callback([&] { run = [&] { return ran(file, along, of, pointwise, counit); }; });

  std::string cell_name, mode = "bc";
  auto* c_exact = app.add_subcommand("exact", "exactness of a cell");
  c_exact->add_option("file", file)->required();
  c_exact->add_option("--cell", cell_name)->required();
  c_exact->add_option("--mode", mode)->check(CLI::IsMember({"bc", "direct"}));
  c_exact->callback([&] { run = [&] { return exact(file, cell_name, mode, g); }; });

  std::string functor_name;
  auto* c_initial = app.add_subcommand("initial", "initiality of a functor");
  c_initial->add_option("file", file)->required();
  c_initial->add_option("--functor", functor_name)->required();
  c_initial->callback([&] { run = [&] { return initial(file, functor_name); }; });

  std::string prof_name;
  bool verify = false;
  std::optional<std::size_t> probes;
  auto* c_tab = app.add_subcommand("tabulate", "tabulation of a profunctor");
  c_tab->add_option("file", file)->required();
  c_tab->add_option("--prof", prof_name)->required();
  c_tab->add_flag("--verify", verify);
  c_tab->add_option("--probes", probes, "objects of probe categories");
  c_tab->callback([&] { run = [&] { return tabulate(file, prof_name, verify, probes); }; });

  std::string left, right;
  auto* c_comma = app.add_subcommand("comma", "comma object of two functors");
  c_comma->add_option("file", file)->required();
  c_comma->add_option("--left", left)->required();
  c_comma->add_option("--right", right)->required();
  c_comma->callback([&] { run = [&] { return comma(file, left, right); }; });

  auto* c_itab = app.add_subcommand("internal-tabulate", "tabulation built from spans");
  c_itab->add_option("file", file)->required();
  c_itab->add_option("--prof", prof_name)->required();
  c_itab->add_flag("--verify", verify);
  c_itab->callback([&] { run = [&] { return internal_tabulate(file, prof_name, verify); }; });

  std::size_t max_objects = 2;
  std::uint64_t seed = 1;
  std::size_t fuzz = 100000;
  auto* c_laws = app.add_subcommand("laws", "the full property suite");
  c_laws->add_option("--corpus-max-objects", max_objects);
  c_laws->add_option("--seed", seed);
  c_laws->add_option("--fuzz-cases", fuzz);
  c_laws->callback([&] { run = [&] { return laws(max_objects, seed, fuzz, g); }; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  const auto start = std::chrono::steady_clock::now();
  try {
    const auto report = run();
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (!g.quiet) std::cout << render(report, seconds, g.format);
    if (!report.ok && report.findings.contains("witness")) {
      std::cerr << "witness: " << report.findings["witness"].get<std::string>() << "\n";
    }
    return report.ok ? kOk : kNegative;
  } catch (const dcat::dsl::ParseError& e) {
    std::cerr << file << ":" << e.what() << "\n";
    return kUsage;
  } catch (const dcat::dsl::WorkspaceValidationError& e) {
    std::cerr << file << ":" << e.what() << "\n";
    return kUsage;
  } catch (const dcat::InternalInvariant& e) {
    std::cerr << "internal invariant violated: " << e.what() << "\n";
    return kInternal;
  } catch (const dcat::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInternal;
  }
}
