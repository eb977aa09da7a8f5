#pragma once

#include <optional>
#include <string>
#include <vector>

#include "dwellcert/bounds.hpp"

namespace dwellcert {

inline constexpr const char* kToolVersion = "0.1.0";
inline constexpr const char* kSchemaVersion = "1";

enum class OutputFormat { text, csv, json };

struct RunConfig {
  std::vector<double> steps;           // h values
  int beam = 200;
  int depth = 2000;
  int enum_length = 12;
  int max_iterations = 200;
  int max_vertices = 20000;
  std::optional<bool> positive_mode;   // unset = auto (Metzler systems)
  OutputFormat format = OutputFormat::text;
};

struct ParsedSystem {
  SwitchingSystem system;
  RunConfig config;
  std::vector<std::string> warnings;
};

/// Strict parse of the JSON system description; unknown keys are rejected
/// with the offending key named. Config fields default when absent.
ParsedSystem parse_system_file(const std::string& path);
ParsedSystem parse_system_string(const std::string& text, const std::string& origin);

/// One h of the pipeline: cycle search (beam + bounded enumeration), invariant
/// polytope run, bounds assembly.
struct StepResult {
  double h = 0.0;
  BoundsReport report;
  std::optional<MultinormCertificate> certificate;
  std::string error;  // nonempty when this h failed

  bool ok() const { return error.empty(); }
};

StepResult analyze_step(const SwitchingSystem& sys, double h, const RunConfig& cfg);

/// One StepResult per configured h, ordered h descending. Steps run
/// independently (DWELLCERT_THREADS of them concurrently); a failing h does
/// not abort the others.
std::vector<StepResult> run_sweep(const SwitchingSystem& sys, const RunConfig& cfg);

std::string format_sweep_text(const SwitchingSystem& sys, const std::vector<StepResult>& rows,
                              double elapsed_seconds);
std::string format_sweep_csv(const std::vector<StepResult>& rows);
std::string format_sweep_json(const SwitchingSystem& sys, const std::vector<StepResult>& rows);

/// Certificate persisted with the full system, step, cycle and vertex lists,
/// so verification needs no search. Written atomically (temp + rename).
void emit_certificate(const MultinormCertificate& cert, const SwitchingSystem& sys, double h,
                      const std::string& path);

struct LoadVerifyResult {
  bool ok = false;
  std::string message;
};

/// Strict parse of a certificate file; fills the embedded system and step.
MultinormCertificate load_certificate_file(const std::string& path, SwitchingSystem* sys,
                                           double* h);

/// Reloads a certificate, checks it was issued for the given system file
/// (certificate_mismatch otherwise), rebuilds the graph and re-verifies every
/// containment with fresh LPs.
LoadVerifyResult load_and_verify(const std::string& cert_path, const std::string& system_path);

/// 2-D only: writes the unit polytopes of each mode and the images of each
/// polytope under the shifted edge operators as layered SVG, plus a JSON
/// sidecar (path + ".json") with the exact coordinates.
void export_polytopes_2d(const MultinormCertificate& cert, const SwitchingSystem& sys, double h,
                         const std::string& svg_path);

enum class RandomFamily { gaussian, metzler };

/// Random test systems matching the experimental families: (gaussian) entries
/// N(0,1); (metzler) integer entries in [-9,9] with nonnegative off-diagonals.
/// Matrices are normalized to unit 2-norm when normalize is set. Deterministic
/// in the seed.
SwitchingSystem generate_random_system(RandomFamily family, int dim, int modes, double dwell_time,
                                       std::uint64_t seed, bool normalize = true);

std::string system_to_json_string(const SwitchingSystem& sys, const RunConfig* cfg = nullptr);

/// %.17g — round-trips doubles exactly.
std::string fmt17(double v);

/// Worker count for independent steps: DWELLCERT_THREADS or hardware
/// concurrency.
int thread_count();

}  // namespace dwellcert
