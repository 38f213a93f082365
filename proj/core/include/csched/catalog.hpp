#pragma once

#include <string>
#include <vector>

#include "csched/ingest.hpp"
#include "csched/model.hpp"

namespace csched {

// Three-node MRI cluster: N1 (8 cores, 500 GB, F1), N2 (48 cores, 20 TB,
// F1 F2), N3 (2572 cores, 210 TB, F1 F2 F3), 100 GB/s links, unit speed.
Cluster mri_cluster();

// Serial MRI workflow T1 -> T2 -> T3 with uniform explicit durations.
Workflow mri_w1();
// Parallel MRI workflow: T1 fans out to T2 and T3, which join in T4.
Workflow mri_w2();

// Moves uniform explicit durations into `work`, so the result depends on
// node speed. At speed 1 the durations are unchanged.
Workflow as_work_based(Workflow workflow);

// Multiplies every node's processing speed.
Cluster scale_speeds(Cluster cluster, double factor);

// Three identical single-core nodes with speeds 1, 1.5, 2 and 1 GB/s links,
// the target of the STG quality workflows.
Cluster stg_cluster();

// Task graphs of the STG quality workflows, in STG text layout.
extern const char* const kStgNoComm;
extern const char* const kStgExplicitComm;
extern const char* const kStgDense;

struct QualityCase {
  std::string label;
  Cluster cluster;
  Workflow workflow;
  // Stand-in for a workflow the literature leaves unspecified.
  bool substitute = false;
};

// W1..W7 at speed factor 1. Durations are compute-derived throughout so
// speed factors act on every case.
std::vector<QualityCase> quality_cases();

}  // namespace csched
