#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>

#include <json.hpp>

// Job layer of the command-line tool.  A job is a command name plus a JSON
// parameter object; run_job executes it and writes a machine-readable report
// to the supplied stream.  Keeping this in the library (rather than in the
// binary's main) lets tests drive jobs in-process and lets the binary stay a
// thin argument-parsing shell.
//
// Report contract (format "json"): a single JSON object
//
//   {
//     "schema": "elliptheta/1",
//     "command": ..., "seed": ...,
//     "tolerances": {"tol", "max_terms", "n_empirical"},
//     "input":  { every consumed parameter, defaults filled in },
//     "result": { command-specific },
//     "flags":  {"not_converged", "pole_proximity"}
//   }
//
// Complex numbers on the wire are [re, im] pairs of decimal strings at 17
// significant digits (lossless double round-trip); they are accepted on
// input as numbers, numeric strings, or such pairs.  Reports are
// deterministic: the same JobSpec (including seed) produces byte-identical
// output, and the echoed "input" object re-parses to an equivalent job.
//
// Exit status: 0 success; 2 when the computation ran but a convergence flag
// tripped (report still emitted, see "flags"); 1 invalid input (a report
// with an "error" object is emitted instead of "result").

namespace elliptheta {

struct JobSpec {
  std::string command;        // eval | radius | residual | identities | bounds | sweep
  nlohmann::json params;      // command-specific parameter object
  std::string format = "json";  // json | csv (csv: sweep only)
  std::uint64_t seed = 0;       // drives the randomized identity suites
  double tol = 0.0;             // 0 = per-command default
  long long max_terms = 4000;
  long long n_empirical = 100000;
};

// Builds a JobSpec from the contents of an --input file: a single JSON
// object {"command": ..., "params": {...}} with optional "format", "seed",
// "tol", "max_terms", "n_empirical" overrides.  Throws ParseError on
// malformed input.
JobSpec job_from_json(const nlohmann::json& file);

// Executes the job and writes the report to `out`.  Returns the process
// exit status described above; never throws.
int run_job(const JobSpec& job, std::ostream& out);

}  // namespace elliptheta
