// cgrkit: renders IFS fractals and chaos-game representations, and builds
// DSSIM distance matrices with 2-D MDS embeddings.
//
// Exit codes: 0 success, 2 input/parse error, 3 contract violation.

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "cgr/cgr.hpp"

using nlohmann::json;

namespace {

struct CommonRaster {
  std::size_t resolution = 512;
  std::string mode = "binary";  // binary | log
  std::size_t burn_in = 20;
};

cgr::RasterMode parse_mode(const std::string& mode) {
  if (mode == "binary") return cgr::RasterMode::Binary;
  if (mode == "log") return cgr::RasterMode::LogCount;
  throw cgr::ParseError("mode must be 'binary' or 'log'");
}

cgr::Point2 parse_point(const std::string& text) {
  std::istringstream is(text);
  double x, y;
  char comma;
  if (!(is >> x >> comma >> y) || comma != ',')
    throw cgr::ParseError("expected 'x,y', got '" + text + "'");
  return {x, y};
}

cgr::Window parse_window(const std::string& text) {
  std::istringstream is(text);
  cgr::Window w;
  char c1, c2, c3;
  if (!(is >> w.xmin >> c1 >> w.xmax >> c2 >> w.ymin >> c3 >> w.ymax) ||
      c1 != ',' || c2 != ',' || c3 != ',')
    throw cgr::ParseError("expected 'xmin,xmax,ymin,ymax', got '" + text + "'");
  return w;
}

std::vector<std::string> split_commas(const std::string& text) {
  std::vector<std::string> parts;
  std::string cur;
  std::istringstream is(text);
  while (std::getline(is, cur, ',')) parts.push_back(cur);
  return parts;
}

void write_image_by_extension(const std::string& path,
                              const cgr::RasterImage& img) {
  std::filesystem::path p(path);
  std::string ext = p.extension().string();
  if (ext == ".pgm")
    cgr::write_pgm_file(path, img);
  else if (ext == ".png")
    cgr::write_png_file(path, img);
  else
    throw cgr::ParseError("output image must end in .png or .pgm: " + path);
}

std::string default_orbit_path(const std::string& image_path) {
  std::filesystem::path p(image_path);
  p.replace_extension(".orbit");
  return p.string();
}

void emit_config(const json& cfg, const std::string& emit_path) {
  std::cout << cfg.dump(2) << '\n';
  if (!emit_path.empty()) {
    std::ofstream os(emit_path);
    if (!os)
      throw cgr::ParseError("cannot open " + emit_path + " for writing");
    os << cfg.dump(2) << '\n';
  }
}

std::string resolve_data_dir(const std::string& flag_value) {
  if (!flag_value.empty()) return flag_value;
  const char* env = std::getenv("CGRKIT_DATA");
  if (env != nullptr && *env != '\0') return env;
#ifdef CGRKIT_DEFAULT_DATA_DIR
  return CGRKIT_DEFAULT_DATA_DIR;
#else
  return "data";
#endif
}

std::size_t thread_cap(std::size_t requested) {
  const char* env = std::getenv("CGRKIT_THREADS");
  if (env != nullptr) {
    char* end = nullptr;
    unsigned long cap = std::strtoul(env, &end, 10);
    if (end == env || *end != '\0' || cap == 0)
      throw cgr::ParseError("CGRKIT_THREADS must be a positive integer");
    requested = std::min<std::size_t>(requested, cap);
  }
  return std::max<std::size_t>(requested, 1);
}

// ---------------------------------------------------------------- ifs ----

struct IfsConfig {
  std::string table;
  std::size_t points = 50000;
  std::uint64_t seed = 1;
  std::string start = "0,0";
  std::size_t burn_in = 20;
  std::size_t resolution = 512;
  std::string mode = "binary";
  std::string window;  // empty = auto-fit
  std::string out = "ifs.png";
  std::string orbit_out;  // empty = none
  std::string emit_config_path;
};

int run_ifs(const IfsConfig& cfg) {
  cgr::IfsSystem sys = cgr::parse_ifs_file(cfg.table);
  cgr::Point2 start = parse_point(cfg.start);
  cgr::Orbit orbit =
      cgr::ifs_iterate(sys, cfg.points, cfg.seed, start, cfg.burn_in);

  double xmin = orbit.points[0].x, xmax = xmin;
  double ymin = orbit.points[0].y, ymax = ymin;
  for (std::size_t i = orbit.burn_in < orbit.points.size() ? orbit.burn_in : 0;
       i < orbit.points.size(); ++i) {
    const cgr::Point2& p = orbit.points[i];
    xmin = std::min(xmin, p.x);
    xmax = std::max(xmax, p.x);
    ymin = std::min(ymin, p.y);
    ymax = std::max(ymax, p.y);
  }

  cgr::Window window;
  if (cfg.window.empty()) {
    window = {xmin, xmax, ymin, ymax};
    if (window.width() <= 0.0) {
      window.xmin -= 0.5;
      window.xmax += 0.5;
    }
    if (window.height() <= 0.0) {
      window.ymin -= 0.5;
      window.ymax += 0.5;
    }
  } else {
    window = parse_window(cfg.window);
  }

  cgr::RasterImage img = cgr::rasterize(orbit, cfg.resolution, cfg.resolution,
                                        window, parse_mode(cfg.mode));
  write_image_by_extension(cfg.out, img);
  if (!cfg.orbit_out.empty()) cgr::write_orbit_file(cfg.orbit_out, orbit);

  json out_cfg = {
      {"subcommand", "ifs"},
      {"table", cfg.table},
      {"points", cfg.points},
      {"seed", cfg.seed},
      {"start", cfg.start},
      {"burn_in", cfg.burn_in},
      {"resolution", cfg.resolution},
      {"mode", cfg.mode},
      {"window", {window.xmin, window.xmax, window.ymin, window.ymax}},
      {"out", cfg.out},
      {"orbit_out", cfg.orbit_out},
  };
  emit_config(out_cfg, cfg.emit_config_path);
  std::cout << "points: " << orbit.points.size() << '\n';
  std::cout << "bbox: [" << xmin << ", " << xmax << "] x [" << ymin << ", "
            << ymax << "]\n";
  if (!sys.all_contractive())
    std::cout << "warning: system contains a non-contractive map\n";
  return 0;
}

// ---------------------------------------------------------------- cgr ----

struct CgrConfig {
  std::string source;
  std::size_t ngon = 4;
  std::string layout;  // square | corners | circle; empty = by ngon
  double rate = 0.0;   // 0 = resolve via rule
  std::string rate_rule;  // fiser | almeida; empty = default
  std::string labels;     // comma-separated vertex labels
  std::string alphabet = "dna";
  std::size_t count = 0;
  bool cf_unit_tail = false;
  std::string start;  // empty = centroid
  std::size_t burn_in = 20;
  std::size_t resolution = 512;
  std::string mode = "binary";
  std::string window;  // empty = polygon bounding box
  std::uint64_t seed = 0;
  bool seed_set = false;
  std::string data_dir;
  std::string out = "cgr.png";
  std::string orbit_out;  // empty = derive from out
  std::string emit_config_path;
};

double resolve_rate(const CgrConfig& cfg, std::string& rule_used) {
  if (cfg.rate != 0.0) {
    rule_used = "explicit";
    if (!(cfg.rate > 0.0 && cfg.rate < 1.0))
      throw cgr::ContractError("rate must be strictly between 0 and 1");
    return cfg.rate;
  }
  if (cfg.rate_rule == "fiser") {
    rule_used = "fiser";
    return cgr::dividing_rate_fiser(cfg.ngon);
  }
  if (cfg.rate_rule == "almeida") {
    rule_used = "almeida";
    return cgr::dividing_rate_almeida(cfg.ngon);
  }
  if (!cfg.rate_rule.empty())
    throw cgr::ParseError("rate rule must be 'fiser' or 'almeida'");
  if (cfg.ngon == 4) {
    rule_used = "default-half";
    return 0.5;
  }
  rule_used = "almeida";
  return cgr::dividing_rate_almeida(cfg.ngon);
}

cgr::PolygonSpec resolve_polygon(const CgrConfig& cfg, std::string& layout_used) {
  layout_used = cfg.layout;
  if (layout_used.empty()) layout_used = cfg.ngon == 4 ? "square" : "circle";
  if (layout_used == "square") {
    if (cfg.ngon != 4)
      throw cgr::ContractError("square layout requires --ngon 4");
    return cgr::PolygonSpec::unit_square_dna();
  }
  if (layout_used == "corners") {
    if (cfg.ngon != 4)
      throw cgr::ContractError("corners layout requires --ngon 4");
    return cgr::PolygonSpec::square_corners();
  }
  if (layout_used == "circle") return cgr::PolygonSpec::unit_circle(cfg.ngon);
  throw cgr::ParseError("layout must be 'square', 'corners' or 'circle'");
}

// Vertex labels either rename polygon corners (stream alphabet already
// matches) or, when the stream alphabet is wider than the polygon, select
// which residue classes occupy the vertices; unmatched symbols are dropped.
cgr::SymbolSequence apply_labels(const cgr::SymbolSequence& seq,
                                 cgr::PolygonSpec& polygon,
                                 const std::vector<std::string>& labels,
                                 std::size_t& dropped) {
  dropped = 0;
  if (labels.empty()) {
    if (seq.alphabet_size != polygon.n())
      throw cgr::ContractError(
          "stream alphabet size " + std::to_string(seq.alphabet_size) +
          " does not match polygon vertex count " +
          std::to_string(polygon.n()) +
          " (use --labels to select residues)");
    return seq;
  }
  if (labels.size() != polygon.n())
    throw cgr::ContractError("need exactly " + std::to_string(polygon.n()) +
                             " labels, got " + std::to_string(labels.size()));
  polygon.labels = labels;
  if (seq.alphabet_size == polygon.n()) return seq;

  std::vector<std::int64_t> to_vertex(seq.alphabet_size, -1);
  for (std::size_t j = 0; j < labels.size(); ++j) {
    bool numeric = !labels[j].empty();
    for (char ch : labels[j])
      if (ch < '0' || ch > '9') numeric = false;
    if (!numeric)
      throw cgr::ContractError("label '" + labels[j] +
                               "' does not name a residue class");
    std::uint64_t residue = std::stoull(labels[j]);
    if (residue >= seq.alphabet_size)
      throw cgr::ContractError("label '" + labels[j] +
                               "' is outside the stream alphabet");
    to_vertex[residue] = static_cast<std::int64_t>(j);
  }
  cgr::SymbolSequence mapped;
  mapped.alphabet_size = static_cast<std::uint32_t>(polygon.n());
  mapped.provenance = seq.provenance;
  for (std::uint32_t s : seq.symbols) {
    std::int64_t v = to_vertex[s];
    if (v < 0)
      ++dropped;
    else
      mapped.symbols.push_back(static_cast<std::uint32_t>(v));
  }
  if (mapped.symbols.empty())
    throw cgr::ContractError("no symbols left after label selection");
  return mapped;
}

cgr::Window polygon_window(const cgr::PolygonSpec& polygon) {
  cgr::Window w;
  w.xmin = w.xmax = polygon.vertices[0].x;
  w.ymin = w.ymax = polygon.vertices[0].y;
  for (const cgr::Point2& v : polygon.vertices) {
    w.xmin = std::min(w.xmin, v.x);
    w.xmax = std::max(w.xmax, v.x);
    w.ymin = std::min(w.ymin, v.y);
    w.ymax = std::max(w.ymax, v.y);
  }
  return w;
}

int run_cgr(const CgrConfig& cfg) {
  cgr::SourceSpec spec = cgr::parse_source_spec(cfg.source);
  if (cfg.seed_set && spec.kind == "prng") spec.prng_seed = cfg.seed;

  std::string data_dir = resolve_data_dir(cfg.data_dir);
  cgr::SourceOptions opts;
  opts.data_dir = data_dir;
  opts.count = cfg.count;
  opts.cf_unit_tail = cfg.cf_unit_tail;
  opts.default_m = cfg.ngon;
  if (cfg.alphabet == "dna")
    opts.alphabet = cgr::dna_alphabet();
  else if (cfg.alphabet == "protein")
    opts.alphabet = cgr::protein_alphabet();
  else
    throw cgr::ParseError("alphabet must be 'dna' or 'protein'");

  cgr::SymbolSequence seq = cgr::resolve_source(spec, opts);

  std::string layout_used;
  cgr::PolygonSpec polygon = resolve_polygon(cfg, layout_used);
  std::string rule_used;
  double rate = resolve_rate(cfg, rule_used);

  std::vector<std::string> labels =
      cfg.labels.empty() ? std::vector<std::string>{} : split_commas(cfg.labels);
  std::size_t dropped_symbols = 0;
  cgr::SymbolSequence mapped = apply_labels(seq, polygon, labels, dropped_symbols);

  cgr::ChaosGameConfig game;
  game.polygon = polygon;
  game.r = rate;
  game.start = cfg.start.empty() ? polygon.centroid() : parse_point(cfg.start);
  game.burn_in = cfg.burn_in;
  game.validate();

  cgr::Orbit orbit = cgr::cgr_orbit(game, mapped);

  cgr::Window window =
      cfg.window.empty() ? polygon_window(polygon) : parse_window(cfg.window);
  cgr::RasterImage img = cgr::rasterize(orbit, cfg.resolution, cfg.resolution,
                                        window, parse_mode(cfg.mode));
  write_image_by_extension(cfg.out, img);
  std::string orbit_out =
      cfg.orbit_out.empty() ? default_orbit_path(cfg.out) : cfg.orbit_out;
  cgr::write_orbit_file(orbit_out, orbit);

  json out_cfg = {
      {"subcommand", "cgr"},
      {"source", spec.text()},
      {"ngon", cfg.ngon},
      {"layout", layout_used},
      {"rate", rate},
      {"rate_rule", rule_used},
      {"labels", polygon.labels},
      {"alphabet", cfg.alphabet},
      {"count", cfg.count},
      {"cf_unit_tail", cfg.cf_unit_tail},
      {"start", {game.start.x, game.start.y}},
      {"burn_in", cfg.burn_in},
      {"resolution", cfg.resolution},
      {"mode", cfg.mode},
      {"window", {window.xmin, window.xmax, window.ymin, window.ymax}},
      {"seed", cfg.seed_set ? json(cfg.seed) : json()},
      {"data_dir", data_dir},
      {"out", cfg.out},
      {"orbit_out", orbit_out},
  };
  emit_config(out_cfg, cfg.emit_config_path);
  std::cout << "symbols: " << mapped.symbols.size() << '\n';
  if (dropped_symbols > 0)
    std::cout << "dropped by label selection: " << dropped_symbols << '\n';
  std::cout << "orbit points: " << orbit.points.size() << '\n';
  return 0;
}

// ------------------------------------------------------------ distmap ----

struct DistmapConfig {
  std::vector<std::string> inputs;
  std::string labels;  // comma-separated, default: file stems
  std::size_t ngon = 4;
  double rate = 0.0;
  std::string rate_rule;
  std::string alphabet = "dna";
  std::size_t burn_in = 20;
  std::size_t resolution = 512;
  std::string mode = "binary";
  std::size_t dims = 2;
  std::size_t threads = 0;  // 0 = hardware
  std::uint64_t seed = 0;
  bool seed_set = false;
  std::string matrix_out = "distmatrix.csv";
  std::string embedding_out = "embedding.csv";
  std::string json_out;  // optional
  std::string emit_config_path;
};

int run_distmap(const DistmapConfig& cfg) {
  if (cfg.inputs.size() < 2)
    throw cgr::ContractError("distmap needs at least 2 inputs");

  CgrConfig render;
  render.ngon = cfg.ngon;
  render.rate = cfg.rate;
  render.rate_rule = cfg.rate_rule;
  std::string rule_used;
  double rate = resolve_rate(render, rule_used);
  std::string layout_used;
  cgr::PolygonSpec polygon = resolve_polygon(render, layout_used);

  cgr::AlphabetMap alphabet;
  if (cfg.alphabet == "dna")
    alphabet = cgr::dna_alphabet();
  else if (cfg.alphabet == "protein")
    alphabet = cgr::protein_alphabet();
  else
    throw cgr::ParseError("alphabet must be 'dna' or 'protein'");

  std::vector<cgr::RasterImage> images;
  std::vector<std::string> labels;
  for (const std::string& input : cfg.inputs) {
    std::filesystem::path p(input);
    std::string ext = p.extension().string();
    if (ext == ".png") {
      images.push_back(cgr::read_png_file(input));
    } else if (ext == ".pgm") {
      images.push_back(cgr::read_pgm_file(input));
    } else {
      cgr::SymbolSequence seq;
      seq.alphabet_size = alphabet.alphabet_size();
      for (const cgr::FastaRecord& rec : cgr::parse_fasta_file(input, alphabet))
        seq.symbols.insert(seq.symbols.end(), rec.sequence.symbols.begin(),
                           rec.sequence.symbols.end());
      if (seq.alphabet_size != polygon.n())
        throw cgr::ContractError(
            "alphabet size " + std::to_string(seq.alphabet_size) +
            " does not match polygon vertex count " +
            std::to_string(polygon.n()));
      cgr::ChaosGameConfig game;
      game.polygon = polygon;
      game.r = rate;
      game.start = polygon.centroid();
      game.burn_in = cfg.burn_in;
      cgr::Orbit orbit = cgr::cgr_orbit(game, seq);
      images.push_back(cgr::rasterize(orbit, cfg.resolution, cfg.resolution,
                                      polygon_window(polygon),
                                      parse_mode(cfg.mode)));
    }
    labels.push_back(p.stem().string());
  }
  if (!cfg.labels.empty()) {
    labels = split_commas(cfg.labels);
    if (labels.size() != images.size())
      throw cgr::ContractError("need one label per input");
  }

  std::size_t threads = thread_cap(
      cfg.threads > 0 ? cfg.threads
                      : std::max(1u, std::thread::hardware_concurrency()));
  cgr::DistanceMatrix dm =
      cgr::distance_matrix(images, cgr::SsimParams::defaults(), labels, threads);

  {
    std::ofstream os(cfg.matrix_out);
    if (!os) throw cgr::ParseError("cannot open " + cfg.matrix_out);
    cgr::write_distance_csv(os, dm);
  }
  if (!cfg.json_out.empty()) {
    std::ofstream os(cfg.json_out);
    if (!os) throw cgr::ParseError("cannot open " + cfg.json_out);
    cgr::write_distance_json(os, dm);
  }

  // A distance matrix over n points supports at most n-1 embedding axes.
  std::size_t dims = std::min(cfg.dims, images.size() - 1);
  cgr::MdsEmbedding emb = cgr::classical_mds(dm, dims);
  {
    std::ofstream os(cfg.embedding_out);
    if (!os) throw cgr::ParseError("cannot open " + cfg.embedding_out);
    cgr::write_embedding_csv(os, emb);
  }

  json out_cfg = {
      {"subcommand", "distmap"},
      {"inputs", cfg.inputs},
      {"labels", labels},
      {"ngon", cfg.ngon},
      {"layout", layout_used},
      {"rate", rate},
      {"rate_rule", rule_used},
      {"alphabet", cfg.alphabet},
      {"burn_in", cfg.burn_in},
      {"resolution", cfg.resolution},
      {"mode", cfg.mode},
      {"dims", dims},
      {"threads", threads},
      {"seed", cfg.seed_set ? json(cfg.seed) : json()},
      {"matrix_out", cfg.matrix_out},
      {"embedding_out", cfg.embedding_out},
      {"json_out", cfg.json_out},
  };
  emit_config(out_cfg, cfg.emit_config_path);
  cgr::write_distance_csv(std::cout, dm);
  std::cout << "negative eigenvalue ratio: " << emb.negative_eigenvalue_ratio
            << '\n';
  return 0;
}

// ------------------------------------------------------------- replay ----

int run_from_config(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw cgr::ParseError("cannot open config " + path);
  json cfg;
  try {
    cfg = json::parse(is);
  } catch (const json::exception& e) {
    throw cgr::ParseError("config " + path + ": " + e.what());
  }
  auto str = [&cfg](const char* key, const std::string& dflt = "") {
    return cfg.contains(key) && !cfg[key].is_null()
               ? cfg[key].get<std::string>()
               : dflt;
  };
  std::string sub = str("subcommand");
  if (sub == "ifs") {
    IfsConfig c;
    c.table = str("table");
    c.points = cfg.value("points", c.points);
    c.seed = cfg.value("seed", c.seed);
    c.start = str("start", c.start);
    c.burn_in = cfg.value("burn_in", c.burn_in);
    c.resolution = cfg.value("resolution", c.resolution);
    c.mode = str("mode", c.mode);
    if (cfg.contains("window") && cfg["window"].is_array()) {
      std::ostringstream w;
      w << cfg["window"][0].get<double>() << ','
        << cfg["window"][1].get<double>() << ','
        << cfg["window"][2].get<double>() << ','
        << cfg["window"][3].get<double>();
      c.window = w.str();
    }
    c.out = str("out", c.out);
    c.orbit_out = str("orbit_out");
    return run_ifs(c);
  }
  if (sub == "cgr") {
    CgrConfig c;
    c.source = str("source");
    c.ngon = cfg.value("ngon", c.ngon);
    c.layout = str("layout");
    c.rate = cfg.value("rate", 0.0);
    c.alphabet = str("alphabet", c.alphabet);
    c.count = cfg.value("count", c.count);
    c.cf_unit_tail = cfg.value("cf_unit_tail", false);
    if (cfg.contains("labels") && cfg["labels"].is_array()) {
      std::string joined;
      for (const auto& l : cfg["labels"])
        joined += (joined.empty() ? "" : ",") + l.get<std::string>();
      c.labels = joined;
    }
    if (cfg.contains("start") && cfg["start"].is_array()) {
      std::ostringstream s;
      s << cfg["start"][0].get<double>() << ',' << cfg["start"][1].get<double>();
      c.start = s.str();
    }
    c.burn_in = cfg.value("burn_in", c.burn_in);
    c.resolution = cfg.value("resolution", c.resolution);
    c.mode = str("mode", c.mode);
    if (cfg.contains("window") && cfg["window"].is_array()) {
      std::ostringstream w;
      w << cfg["window"][0].get<double>() << ','
        << cfg["window"][1].get<double>() << ','
        << cfg["window"][2].get<double>() << ','
        << cfg["window"][3].get<double>();
      c.window = w.str();
    }
    if (cfg.contains("seed") && !cfg["seed"].is_null()) {
      c.seed = cfg["seed"].get<std::uint64_t>();
      c.seed_set = true;
    }
    c.data_dir = str("data_dir");
    c.out = str("out", c.out);
    c.orbit_out = str("orbit_out");
    return run_cgr(c);
  }
  if (sub == "distmap") {
    DistmapConfig c;
    if (cfg.contains("inputs"))
      c.inputs = cfg["inputs"].get<std::vector<std::string>>();
    if (cfg.contains("labels") && cfg["labels"].is_array()) {
      std::string joined;
      for (const auto& l : cfg["labels"])
        joined += (joined.empty() ? "" : ",") + l.get<std::string>();
      c.labels = joined;
    }
    c.ngon = cfg.value("ngon", c.ngon);
    c.rate = cfg.value("rate", 0.0);
    c.alphabet = str("alphabet", c.alphabet);
    c.burn_in = cfg.value("burn_in", c.burn_in);
    c.resolution = cfg.value("resolution", c.resolution);
    c.mode = str("mode", c.mode);
    c.dims = cfg.value("dims", c.dims);
    c.threads = cfg.value("threads", c.threads);
    if (cfg.contains("seed") && !cfg["seed"].is_null()) {
      c.seed = cfg["seed"].get<std::uint64_t>();
      c.seed_set = true;
    }
    c.matrix_out = str("matrix_out", c.matrix_out);
    c.embedding_out = str("embedding_out", c.embedding_out);
    c.json_out = str("json_out");
    return run_distmap(c);
  }
  throw cgr::ParseError("config " + path + ": unknown subcommand '" + sub + "'");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"chaos-game and IFS fractal toolkit"};
  app.require_subcommand(0, 1);

  std::string config_path;
  app.add_option("--config", config_path,
                 "replay a previously printed run configuration");

  IfsConfig ifs;
  CLI::App* ifs_cmd =
      app.add_subcommand("ifs", "render an iterated function system");
  ifs_cmd->add_option("table", ifs.table, "IFS table file (a b c d e f p rows)")
      ->required();
  ifs_cmd->add_option("--points", ifs.points, "orbit length");
  ifs_cmd->add_option("--seed", ifs.seed, "PRNG seed");
  ifs_cmd->add_option("--start", ifs.start, "start point x,y");
  ifs_cmd->add_option("--burn-in", ifs.burn_in, "points excluded from raster");
  ifs_cmd->add_option("--res", ifs.resolution, "raster resolution (square)");
  ifs_cmd->add_option("--mode", ifs.mode, "binary or log");
  ifs_cmd->add_option("--window", ifs.window,
                      "xmin,xmax,ymin,ymax (default: fit orbit)");
  ifs_cmd->add_option("--out", ifs.out, "output image (.png or .pgm)");
  ifs_cmd->add_option("--orbit", ifs.orbit_out, "binary orbit dump path");
  ifs_cmd->add_option("--emit-config", ifs.emit_config_path,
                      "also write the effective config JSON here");

  CgrConfig cgrc;
  std::vector<std::string> source_words;
  CLI::App* cgr_cmd =
      app.add_subcommand("cgr", "render a chaos game representation");
  cgr_cmd->add_option("source", source_words,
                      "symbol source, e.g. 'pi mod 4', fasta:f.fa, "
                      "fib:3000 mod 10, primes:1000000,103 mod 4, "
                      "cf:e mod 4, prng:42")
      ->required()
      ->expected(-1);
  cgr_cmd->add_option("--ngon", cgrc.ngon, "polygon vertex count");
  cgr_cmd->add_option("--layout", cgrc.layout, "square, corners or circle");
  cgr_cmd->add_option("--rate", cgrc.rate, "dividing rate in (0,1)");
  cgr_cmd->add_option("--rate-rule", cgrc.rate_rule, "fiser or almeida");
  cgr_cmd->add_option("--labels", cgrc.labels, "comma-separated vertex labels");
  cgr_cmd->add_option("--alphabet", cgrc.alphabet, "dna or protein (fasta)");
  cgr_cmd->add_option("--count", cgrc.count, "truncate stream length");
  cgr_cmd->add_flag("--cf-unit-tail", cgrc.cf_unit_tail,
                    "use the non-canonical (a-1,1) final quotient");
  cgr_cmd->add_option("--start", cgrc.start, "start point x,y (default centroid)");
  cgr_cmd->add_option("--burn-in", cgrc.burn_in, "points excluded from raster");
  cgr_cmd->add_option("--res", cgrc.resolution, "raster resolution (square)");
  cgr_cmd->add_option("--mode", cgrc.mode, "binary or log");
  cgr_cmd->add_option("--window", cgrc.window,
                      "xmin,xmax,ymin,ymax (default: polygon box)");
  cgr_cmd->add_option("--seed", cgrc.seed, "override prng source seed");
  cgr_cmd->add_option("--data-dir", cgrc.data_dir, "bundled digit file dir");
  cgr_cmd->add_option("--out", cgrc.out, "output image (.png or .pgm)");
  cgr_cmd->add_option("--orbit", cgrc.orbit_out, "binary orbit dump path");
  cgr_cmd->add_option("--emit-config", cgrc.emit_config_path,
                      "also write the effective config JSON here");

  DistmapConfig dist;
  CLI::App* dist_cmd = app.add_subcommand(
      "distmap", "pairwise DSSIM matrix and 2-D MDS embedding");
  dist_cmd->add_option("inputs", dist.inputs,
                       "two or more FASTA or image (.png/.pgm) files")
      ->required()
      ->expected(-1);
  dist_cmd->add_option("--labels", dist.labels, "comma-separated point labels");
  dist_cmd->add_option("--ngon", dist.ngon, "polygon vertex count");
  dist_cmd->add_option("--rate", dist.rate, "dividing rate in (0,1)");
  dist_cmd->add_option("--rate-rule", dist.rate_rule, "fiser or almeida");
  dist_cmd->add_option("--alphabet", dist.alphabet, "dna or protein");
  dist_cmd->add_option("--burn-in", dist.burn_in, "points excluded from raster");
  dist_cmd->add_option("--res", dist.resolution, "raster resolution (square)");
  dist_cmd->add_option("--mode", dist.mode, "binary or log");
  dist_cmd->add_option("--dims", dist.dims, "embedding dimensions");
  dist_cmd->add_option("--threads", dist.threads,
                       "pairwise workers (capped by CGRKIT_THREADS)");
  dist_cmd->add_option("--seed", dist.seed, "recorded in the config");
  dist_cmd->add_option("--matrix-out", dist.matrix_out, "distance matrix CSV");
  dist_cmd->add_option("--embedding-out", dist.embedding_out, "embedding CSV");
  dist_cmd->add_option("--json-out", dist.json_out, "distance matrix JSON");
  dist_cmd->add_option("--emit-config", dist.emit_config_path,
                       "also write the effective config JSON here");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (!config_path.empty()) return run_from_config(config_path);
    if (ifs_cmd->parsed()) return run_ifs(ifs);
    if (cgr_cmd->parsed()) {
      cgrc.seed_set = cgr_cmd->count("--seed") > 0;
      std::string joined;
      for (const std::string& w : source_words)
        joined += (joined.empty() ? "" : " ") + w;
      cgrc.source = joined;
      return run_cgr(cgrc);
    }
    if (dist_cmd->parsed()) {
      dist.seed_set = dist_cmd->count("--seed") > 0;
      return run_distmap(dist);
    }
    std::cerr << app.help() << '\n';
    return 2;
  } catch (const cgr::ParseError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const cgr::ContractError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
