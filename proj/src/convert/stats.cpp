#include "loranrec/convert/stats.hpp"

#include <algorithm>
#include <charconv>
#include <map>

#include "loranrec/error.hpp"
#include "loranrec/fs_util.hpp"

namespace loranrec {

namespace fs = std::filesystem;

namespace {

std::string number(double v) {
  char buf[32];
  auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, p);
}

}  // namespace

SessionStats collect_stats(const fs::path& root, Millis gap_threshold) {
  if (!fs::is_directory(root)) throw IoError("'" + root.string() + "' is not a directory");
  SessionStats stats;
  for (const auto& entry : fs::recursive_directory_iterator(root)) {
    if (entry.is_regular_file() && entry.path().filename() == kManifestFile) {
      stats.export_dirs.push_back(entry.path().parent_path());
    }
  }
  std::sort(stats.export_dirs.begin(), stats.export_dirs.end());

  std::vector<GpsFix> gps;
  std::vector<LoranMeasurement> loran;
  std::uint64_t arrival = 0;
  for (const auto& dir : stats.export_dirs) {
    const auto manifest = SessionManifest::load(dir);
    const ExportFormat format =
        manifest.export_files.empty() ? ExportFormat::kColumns : manifest.export_files.front().format;
    auto imported = import_timeline(dir, format);
    for (auto& f : imported.gps) {
      f.source_line = arrival++;
      gps.push_back(std::move(f));
    }
    for (auto& m : imported.loran) {
      m.source_line = arrival++;
      loran.push_back(std::move(m));
    }
  }
  stats.timeline = merge_sort(gps, loran);
  stats.summary = summarize(stats.timeline, gap_threshold);
  return stats;
}

std::vector<fs::path> write_stats(const SessionStats& stats, const fs::path& out_dir,
                                  std::optional<StationId> station) {
  fs::create_directories(out_dir);
  std::map<StationId, std::string> snr;
  if (station) snr[*station] = "timestamp,snr_db\n";
  std::string fixes = "timestamp,lat_deg,lon_deg,alt_m\n";
  for (const auto& r : stats.timeline) {
    if (r.is_gps()) {
      const auto& f = r.gps();
      if (f.no_fix()) continue;
      fixes += format_iso8601(r.timestamp) + "," + number(*f.lat) + "," + number(*f.lon) + "," +
               (f.alt_m ? number(*f.alt_m) : std::string()) + "\n";
      continue;
    }
    const auto id = r.loran().station();
    if (station && id != *station) continue;
    auto [it, fresh] = snr.try_emplace(id, "timestamp,snr_db\n");
    it->second += format_iso8601(r.timestamp) + "," + number(r.loran().snr_db) + "\n";
  }

  std::vector<fs::path> written;
  for (const auto& [id, text] : snr) {
    written.push_back(out_dir / ("snr_" + id.to_string() + ".csv"));
    write_file_atomic(written.back(), text);
  }
  written.push_back(out_dir / "gps_fixes.csv");
  write_file_atomic(written.back(), fixes);
  written.push_back(out_dir / "summary.json");
  write_file_atomic(written.back(), stats.summary.to_json().dump(2) + "\n");
  return written;
}

}  // namespace loranrec
