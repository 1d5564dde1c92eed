// cdual: Cauchy dual subnormality checks for weighted shifts on rooted trees.
#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <iterator>
#include <sstream>

#include "cdual/app.hpp"
#include "cdual/errors.hpp"

namespace {

std::string slurp(const std::string& path) {
  if (path == "-") {
    return {std::istreambuf_iterator<char>(std::cin), std::istreambuf_iterator<char>()};
  }
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void write_file(const std::string& path, const std::string& body) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << body;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Cauchy dual subnormality for weighted shifts on rooted directed trees"};
  std::string spec_path, demo, out_path, csv_path;
  std::optional<double> tol;
  std::optional<int> nmax, depth;
  bool quiet = false, list = false;
  app.add_option("--spec", spec_path, "run spec JSON file ('-' for stdin)");
  app.add_option("--demo", demo, "run one catalog demo");
  app.add_option("--out", out_path, "write the JSON report here");
  app.add_option("--csv", csv_path, "write the last moment sequence as CSV");
  app.add_option("--tol", tol, "relative tolerance")->check(CLI::PositiveNumber);
  app.add_option("--nmax", nmax, "moment order")->check(CLI::Range(2, 4096));
  app.add_option("--depth", depth, "override materialization depth")->check(CLI::Range(2, 4096));
  app.add_flag("--quiet", quiet, "print only a one-line summary");
  app.add_flag("--list-demos", list, "print the demo catalog");
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }

  if (list) {
    for (const auto& d : cdual::demo_catalog()) std::cout << d << '\n';
    return 0;
  }
  if (spec_path.empty() == demo.empty()) {
    std::cerr << "error: give exactly one of --spec or --demo\n";
    return 2;
  }

  cdual::Report rep;
  std::string verbosity = quiet ? "quiet" : "normal";
  try {
    if (!demo.empty()) {
      cdual::DemoOptions o;
      if (tol) o.tol = *tol;
      o.nmax = nmax;
      o.depth = depth;
      rep = cdual::run_demo(demo, o);
    } else {
      auto spec = cdual::parse_spec(slurp(spec_path));
      if (tol) spec.tol = *tol;
      if (nmax) spec.nmax = nmax;
      if (depth && spec.tree) spec.tree->depth = *depth;
      if (out_path.empty() && spec.output.json_path) out_path = *spec.output.json_path;
      if (csv_path.empty() && spec.output.csv_path) csv_path = *spec.output.csv_path;
      if (!quiet) verbosity = spec.output.verbosity;
      rep = cdual::run_suite(spec);
    }
  } catch (const cdual::ParseError& e) {
    std::cerr << "parse error: " << e.what() << '\n';
    return 2;
  } catch (const cdual::ConfigurationError& e) {
    std::cerr << "configuration error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }

  try {
    std::string body = rep.to_json().dump(2) + "\n";
    if (!out_path.empty()) write_file(out_path, body);
    if (!csv_path.empty()) {
      if (!rep.csv_sequence) {
        std::cerr << "warning: no moments command ran; CSV not written\n";
      } else {
        std::ostringstream os;
        cdual::write_csv(os, *rep.csv_sequence);
        write_file(csv_path, os.str());
      }
    }
    if (verbosity == "quiet") {
      for (const auto& c : rep.commands) {
        std::cout << c.name << ": " << c.status;
        if (c.result.contains("conclusion")) std::cout << " - " << c.result["conclusion"].get<std::string>();
        std::cout << '\n';
      }
    } else if (out_path.empty() || verbosity == "verbose") {
      std::cout << body;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return rep.exit_code;
}
