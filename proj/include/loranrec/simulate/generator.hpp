#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "loranrec/parse/records.hpp"
#include "loranrec/simulate/scenario.hpp"

namespace loranrec {

// One line of receiver output, CRLF included, stamped with the scenario time
// at which the receiver emits it.
struct Emission {
  UtcInstant time;
  std::string bytes;
};

struct CorruptionTally {
  std::uint64_t bad_checksum = 0;
  std::uint64_t truncated = 0;
  std::uint64_t garbage = 0;
};

// The records whose sentences were emitted intact, at serialized precision,
// in emission order. Corrupted sentences contribute only to the tally.
struct GroundTruth {
  std::vector<GpsFix> gps;
  std::vector<LoranMeasurement> loran;
  std::uint64_t sentences = 0;  // every GGA, ZDA and $PLRM emitted, intact or not
  std::uint64_t zda = 0;
  CorruptionTally corrupted;
  std::map<StationId, std::uint64_t> per_station;
};

struct GeneratedStream {
  std::vector<Emission> emissions;
  GroundTruth truth;

  std::string bytes() const;
};

// Pure function of the scenario: the same scenario yields the same bytes.
// At equal times GGA precedes ZDA, which precedes $PLRM in station order.
GeneratedStream generate_stream(const Scenario& scenario);

// Writes <dir>/truth_gps.csv and <dir>/truth_loran.csv using the column
// layout of the timeline export.
void write_ground_truth(const GroundTruth& truth, const std::filesystem::path& dir);

}  // namespace loranrec
