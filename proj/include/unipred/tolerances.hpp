#pragma once

namespace unipred {

// Every numeric slack used by validation and verdicts lives here.
struct Tolerances {
  double normalization = 1e-12;  // source rows, weight vectors
  double property = 1e-10;       // mixture normalization/dominance, optimality
  double bound = 1e-9;           // entropy and error/loss bounds on exact ledgers
  double inequality = 1e-12;     // squared distance <= relative entropy
  double input_vector = 1e-10;   // probability vectors handed to step_kl and friends
  double sigmas = 3.0;           // Monte-Carlo verdicts: allowed deficit in standard errors
};

inline constexpr Tolerances tolerances{};

}  // namespace unipred
