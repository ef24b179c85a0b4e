// dforge: batch front door for the Dirichlet-ring toolkit.
//
//   dforge <command> --job spec.json [--out report.json] [--csv out.csv]
//                    [--deterministic] [--threads T]
//
// Exit codes: 0 success, 1 error (could not run), 2 ran with a negative
// verdict (rank not certified, nonempty exceptional prime set, residual
// above its certified bound).

#include <cstring>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "dforge/job.hpp"

namespace {

void usage(std::ostream& os) {
  os << "usage: dforge <command> --job spec.json [--out report.json] [--csv out.csv]\n"
        "              [--deterministic] [--threads T]\n"
        "commands: eval convolve inverse derive peel rank equiv probe residual\n"
        "environment: DFORGE_FACTOR_LIMIT overrides the factorization horizon\n";
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) dforge::fail(dforge::Errc::parse_error, "cannot open job file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) dforge::fail(dforge::Errc::parse_error, "cannot write '" + path + "'");
  out << content;
}

}  // namespace

int main(int argc, char** argv) {
  if (argc < 2) {
    usage(std::cerr);
    return 1;
  }
  std::string command = argv[1];
  if (command == "--help" || command == "-h") {
    usage(std::cout);
    return 0;
  }
  std::string job_path, out_path, csv_path;
  bool deterministic = false;
  int threads = 1;
  for (int i = 2; i < argc; ++i) {
    std::string arg = argv[i];
    auto next = [&]() -> std::string {
      if (i + 1 >= argc) {
        std::cerr << "dforge: " << arg << " needs a value\n";
        std::exit(1);
      }
      return argv[++i];
    };
    if (arg == "--job") {
      job_path = next();
    } else if (arg == "--out") {
      out_path = next();
    } else if (arg == "--csv") {
      csv_path = next();
    } else if (arg == "--deterministic") {
      deterministic = true;
    } else if (arg == "--threads") {
      threads = std::stoi(next());
    } else {
      std::cerr << "dforge: unknown option '" << arg << "'\n";
      usage(std::cerr);
      return 1;
    }
  }
  if (job_path.empty()) {
    std::cerr << "dforge: --job is required\n";
    return 1;
  }

  try {
    dforge::JobSpec spec = dforge::parse_job(read_file(job_path));
    if (spec.command != command)
      dforge::fail(dforge::Errc::parse_error, "command line says '" + command +
                                                  "' but the job file says '" + spec.command + "'");
    dforge::RunReport report = dforge::run_job(spec, threads, deterministic);

    if (out_path.empty()) out_path = spec.out_report;
    if (csv_path.empty()) csv_path = spec.out_csv;
    std::string rendered = report.report.dump(2) + "\n";
    if (!out_path.empty()) {
      write_file(out_path, rendered);
    } else {
      std::cout << rendered;
    }
    if (!csv_path.empty()) {
      if (report.csv.empty())
        dforge::fail(dforge::Errc::parse_error,
                     "command '" + spec.command + "' has no CSV output");
      write_file(csv_path, report.csv);
    }
    return report.exit_code;
  } catch (const dforge::Error& e) {
    nlohmann::json err = {{"error", {{"code", dforge::errc_name(e.code())}, {"message", e.what()}}}};
    std::cerr << err.dump(2) << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "dforge: " << e.what() << "\n";
    return 1;
  }
}
