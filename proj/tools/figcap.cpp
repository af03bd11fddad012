// figcap: command-line driver for corpus extraction, baselines, normalized
// scoring, coverage, overlap, annotation analysis and the annotation server.

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <iostream>
#include <map>
#include <set>

#include <CLI11.hpp>

#include "figcap/analysis.hpp"
#include "figcap/annotate.hpp"
#include "figcap/baselines.hpp"
#include "figcap/corpus.hpp"
#include "figcap/docparse.hpp"
#include "figcap/jsonl.hpp"
#include "figcap/mentions.hpp"
#include "figcap/metrics.hpp"
#include "figcap/metrics_corpus.hpp"
#include "figcap/normeval.hpp"

namespace fs = std::filesystem;
using namespace figcap;

namespace {

constexpr double kGoldPrecision = 0.99;
constexpr double kGoldRecall = 0.94;

struct Common {
  std::string data_dir;
  std::string out_dir = ".";
  std::uint64_t seed = 0;
  std::vector<std::string> windows;
  std::string metrics = "rouge1,rouge2,rougeL";
  std::string stopwords = std::string(kDefaultStopwords);
};

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t comma = text.find(',', pos);
    if (comma == std::string::npos) comma = text.size();
    std::string item = text.substr(pos, comma - pos);
    if (!item.empty()) out.push_back(item);
    pos = comma + 1;
  }
  return out;
}

std::string number(double value, int digits = 6) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, value);
  return buf;
}

fs::path data_dir(const Common& c) {
  if (!c.data_dir.empty()) return c.data_dir;
  if (const char* env = std::getenv("FIGCAP_DATA_DIR")) return env;
  throw Error("no data directory: pass --data-dir or set FIGCAP_DATA_DIR");
}

void require_dir(const fs::path& dir) {
  if (!fs::is_directory(dir)) throw Error("not a directory: " + dir.string());
}

// Mentions from <dir>/mentions.jsonl when present, otherwise detected.
MentionIndex load_or_build_mentions(const Corpus& corpus, const fs::path& dir) {
  if (fs::exists(dir / "mentions.jsonl")) {
    return read_mentions(dir / "mentions.jsonl", corpus);
  }
  return build_mention_index(corpus);
}

std::vector<SourceKind> window_kinds(const Common& c) {
  std::vector<SourceKind> kinds;
  for (const std::string& w : c.windows) {
    SourceKind kind;
    kind.base = SourceBase::kWindow;
    kind.window = parse_window(w);
    kinds.push_back(kind);
  }
  return kinds;
}

// papers.jsonl rebuilt from <dir>/xml/*.xml, sorted by file name.
void papers_from_xml(const fs::path& xml_dir, const fs::path& out) {
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(xml_dir)) {
    if (entry.path().extension() == ".xml") files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  std::vector<Json> papers;
  for (const fs::path& file : files) {
    ParsedDocument parsed;
    try {
      parsed = parse_document(read_file(file), file.stem().string());
    } catch (const XmlParseError& e) {
      throw Error(file.string() + ": " + e.what());
    }
    for (const std::string& w : parsed.warnings) {
      std::cerr << file.string() << ": warning: " << w << "\n";
    }
    Json paragraphs = Json::array();
    for (const Paragraph& p : parsed.document.paragraphs) {
      paragraphs.push_back({{"paragraph_id", p.paragraph_id}, {"text", p.text}});
    }
    papers.push_back({{"paper_id", parsed.document.paper_id},
                      {"title", parsed.document.title},
                      {"abstract", parsed.document.abstract},
                      {"paragraphs", std::move(paragraphs)}});
  }
  write_jsonl(out / "papers.jsonl", papers);
}

int run_extract(const Common& c, bool resplit, int better_min) {
  const fs::path in = data_dir(c);
  const fs::path out = c.out_dir;
  require_dir(in);
  fs::create_directories(out);
  const bool same_dir = fs::equivalent(in, out);
  if (fs::is_directory(in / "xml")) {
    papers_from_xml(in / "xml", out);
  } else if (!same_dir) {
    fs::copy_file(in / "papers.jsonl", out / "papers.jsonl",
                  fs::copy_options::overwrite_existing);
  }
  if (!same_dir) {
    for (const char* name : {"figures.jsonl", "ocr.jsonl", "splits.json"}) {
      if (fs::exists(in / name)) {
        fs::copy_file(in / name, out / name, fs::copy_options::overwrite_existing);
      }
    }
  }
  Corpus corpus = load_corpus(out);
  if (resplit) corpus = apply_splits(corpus, resplit_by_paper(corpus, {}, c.seed));
  write_corpus(corpus, out);
  const MentionIndex index = build_mention_index(corpus);
  write_mentions(index, corpus, out / "mentions.jsonl");
  if (better_min > 0) {
    Corpus better = filter_better(corpus, better_min);
    write_corpus(better, out / "better");
    std::cout << "better subset: " << better.figures().size() << " figures\n";
  }
  std::cout << "papers: " << corpus.documents().size()
            << "\nfigures: " << corpus.figures().size()
            << "\nexcluded (no mention): " << index.excluded.size() << "\n";
  return 0;
}

int run_mentions(const Common& c) {
  const fs::path in = data_dir(c);
  const Corpus corpus = load_corpus(in);
  const MentionIndex index = build_mention_index(corpus);
  write_mentions(index, corpus, fs::path(c.out_dir) / "mentions.jsonl");
  std::cout << "figures: " << corpus.figures().size()
            << "\nexcluded (no mention): " << index.excluded.size() << "\n";
  return 0;
}

int run_baseline(const Common& c, const std::vector<std::string>& kinds,
                 const std::vector<int>& ks, const std::vector<int>& targets) {
  const fs::path in = data_dir(c);
  const Corpus corpus = load_corpus(in);
  const MentionIndex index = load_or_build_mentions(corpus, in);
  std::vector<SourceKind> reuse;
  for (const std::string& k : kinds) reuse.push_back(SourceKind::parse(k));
  for (const SourceKind& k : window_kinds(c)) reuse.push_back(k);

  std::vector<PredictionRecord> predictions;
  for (const FigureRecord& fig : corpus.figures()) {
    if (index.is_excluded(fig.figure_id)) continue;
    for (const SourceKind& kind : reuse) {
      predictions.push_back(reuse_prediction(corpus, index, fig, kind));
    }
    for (int k : ks) {
      predictions.push_back(random_sentence_prediction(corpus, index, fig, k, c.seed));
    }
    for (int t : targets) {
      predictions.push_back(truncated_prediction(corpus, index, fig, t, c.seed));
    }
  }
  write_predictions(predictions, fs::path(c.out_dir) / "predictions.jsonl");
  std::cout << "predictions: " << predictions.size() << "\n";
  return 0;
}

std::string curve_file_name(const std::string& metric) {
  return "curve-" + metric + ".json";
}

int run_curve(const Common& c, int seed_count) {
  const fs::path in = data_dir(c);
  const Corpus corpus = load_corpus(in);
  const MentionIndex index = load_or_build_mentions(corpus, in);
  if (seed_count < 1) throw Error("--seed-count must be positive");
  std::vector<std::uint64_t> seeds;
  for (int i = 0; i < seed_count; ++i) seeds.push_back(c.seed + i);
  for (const std::string& metric : split_list(c.metrics)) {
    const RandomCurve curve = build_random_curve(corpus, index, metric, seeds);
    write_curve(curve, fs::path(c.out_dir) / curve_file_name(metric));
    std::cout << metric << ": " << curve.anchors.size() << " anchors\n";
  }
  return 0;
}

int run_score(const Common& c, const std::string& systems_path,
              const std::vector<std::string>& curve_paths,
              const std::string& external_path, const std::string& ratings_path) {
  const Corpus corpus = load_corpus(data_dir(c));
  std::map<std::string, std::string> references;
  for (const FigureRecord& fig : corpus.figures()) {
    references[fig.figure_id] = fig.caption_text;
  }
  std::map<std::string, RandomCurve> curves;
  for (const std::string& p : curve_paths) {
    RandomCurve curve = read_curve(p);
    curves[curve.metric_id] = std::move(curve);
  }
  std::vector<std::string> metrics = split_list(c.metrics);
  if (metrics.empty()) {
    for (const auto& [id, curve] : curves) metrics.push_back(id);
  }
  std::vector<ExternalScore> external;
  if (!external_path.empty()) external = read_external_scores(external_path);

  std::map<std::string, std::vector<PredictionRecord>> by_system;
  for (PredictionRecord& p : read_predictions(systems_path)) {
    by_system[p.system_id].push_back(std::move(p));
  }
  std::vector<QualityBeam> beams;
  if (!ratings_path.empty()) beams = quality_beams(read_ratings(ratings_path));

  std::vector<ScoreReport> reports;
  for (const auto& [system, predictions] : by_system) {
    ReportInputs inputs{predictions, &references, &curves, metrics, external};
    reports.push_back(normalize_report(inputs));
    for (ScoreReport& r : beam_split_eval(inputs, beams)) {
      reports.push_back(std::move(r));
    }
  }
  const std::string csv = format_report_csv(reports);
  write_file(fs::path(c.out_dir) / "report.csv", csv);
  std::cout << csv;
  return 0;
}

int run_coverage(const Common& c, std::vector<std::string> kinds,
                 const std::string& alignments_path) {
  const fs::path in = data_dir(c);
  const Corpus corpus = load_corpus(in);
  const MentionIndex index = load_or_build_mentions(corpus, in);
  std::vector<SourceKind> sources;
  if (kinds.empty() && c.windows.empty()) {
    kinds = {"Mention", "Paragraph", "OCR", "Mention+OCR", "Paragraph+OCR"};
  }
  for (const std::string& k : kinds) sources.push_back(SourceKind::parse(k));
  for (const SourceKind& k : window_kinds(c)) sources.push_back(k);

  AlignmentSet alignments;
  if (!alignments_path.empty()) alignments = import_alignments(alignments_path);
  const TokenizerConfig content = TokenizerConfig::content_words(c.stopwords);
  content.validate();

  std::string csv = "source,caption_coverage,source_coverage,figures\n";
  for (const SourceKind& kind : sources) {
    const CoverageRow row = macro_coverage(
        corpus, index, kind, alignments_path.empty() ? nullptr : &alignments,
        content);
    csv += row.source_kind + "," + number(row.caption_percent, 2) + "," +
           number(row.source_percent, 2) + "," + std::to_string(row.figures) + "\n";
  }
  write_file(fs::path(c.out_dir) / "coverage.csv", csv);
  std::cout << csv;
  return 0;
}

int run_overlap(const Common& c) {
  const fs::path in = data_dir(c);
  const Corpus corpus = load_corpus(in);
  const MentionIndex index = load_or_build_mentions(corpus, in);
  std::string csv = "mention,context,caption,bleu4\n";
  for (MentionMode mode : {MentionMode::kFirst, MentionMode::kRandom}) {
    for (int context = 0; context <= 2; ++context) {
      for (CaptionMode caption : {CaptionMode::kFirst, CaptionMode::kWhole}) {
        const double bleu =
            mention_caption_overlap(corpus, index, mode, context, caption, c.seed);
        csv += std::string(mode == MentionMode::kFirst ? "first" : "random") +
               ",+" + std::to_string(context) + "," +
               (caption == CaptionMode::kFirst ? "first" : "whole") + "," +
               number(100 * bleu, 2) + "\n";
      }
    }
  }
  write_file(fs::path(c.out_dir) / "overlap.csv", csv);
  std::cout << csv;
  return 0;
}

std::string optional_number(std::optional<double> v) {
  return v ? number(*v) : "";
}

int run_analyze(const Common& c, const std::string& ratings_path,
                const std::string& rankings_path, const std::string& votes_path,
                const std::string& predictions_path, const std::string& ttest_mode,
                const std::string& pooling) {
  const fs::path out = c.out_dir;
  fs::create_directories(out);
  if (!ratings_path.empty()) {
    const auto ratings = read_ratings(ratings_path);
    std::string csv = "aspect,agree,disagree,total,agree_percent\n";
    for (const ConsolidationRow& row : consolidation_table(ratings)) {
      csv += std::string(aspect_name(row.aspect)) + "," + std::to_string(row.agree) +
             "," + std::to_string(row.disagree) + "," + std::to_string(row.total()) +
             "," + number(row.agree_percent(), 2) + "\n";
    }
    write_file(out / "consolidation.csv", csv);
    std::cout << csv;

    std::map<std::string, double> lengths;
    if (!c.data_dir.empty() || std::getenv("FIGCAP_DATA_DIR")) {
      const Corpus corpus = load_corpus(data_dir(c));
      for (const FigureRecord& fig : corpus.figures()) {
        lengths[fig.figure_id] = static_cast<double>(token_length(fig.caption_text));
      }
    }
    const CorrelationMatrix m = aspect_correlations(ratings, lengths);
    std::string corr = "a,b,pearson\n";
    for (std::size_t i = 0; i < m.labels.size(); ++i) {
      for (std::size_t j = i + 1; j < m.labels.size(); ++j) {
        corr += m.labels[i] + "," + m.labels[j] + "," + optional_number(m.r[i][j]) + "\n";
      }
    }
    write_file(out / "correlations.csv", corr);
  }

  if (!rankings_path.empty()) {
    const auto rankings = read_rankings(rankings_path);
    std::map<std::string, std::vector<RankingRecord>> by_annotator;
    for (const RankingRecord& r : rankings) by_annotator[r.annotator_id].push_back(r);
    const AgreementPooling mode = pooling == "per-figure"
                                      ? AgreementPooling::kPerFigureMean
                                      : AgreementPooling::kPooled;
    std::string csv = "annotator_a,annotator_b,kendall_tau,spearman_rho,figures\n";
    for (auto a = by_annotator.begin(); a != by_annotator.end(); ++a) {
      for (auto b = std::next(a); b != by_annotator.end(); ++b) {
        const Agreement ag = rank_agreement(a->second, b->second, mode);
        csv += a->first + "," + b->first + "," + number(ag.kendall_tau) + "," +
               number(ag.spearman_rho) + "," + std::to_string(ag.shared_figures) + "\n";
      }
    }
    write_file(out / "agreement.csv", csv);
    std::cout << csv;

    const auto ranks = mean_ranks(rankings);
    const TTestMode tmode = ttest_mode == "paired" ? TTestMode::kPaired : TTestMode::kWelch;
    std::string tcsv = "system_a,system_b,mean_a,mean_b,t,df,p\n";
    for (auto a = ranks.begin(); a != ranks.end(); ++a) {
      for (auto b = std::next(a); b != ranks.end(); ++b) {
        std::vector<double> xa, xb;
        for (const auto& [figure, r] : a->second) {
          auto it = b->second.find(figure);
          if (tmode == TTestMode::kPaired && it == b->second.end()) continue;
          xa.push_back(r);
          if (tmode == TTestMode::kPaired) xb.push_back(it->second);
        }
        if (tmode == TTestMode::kWelch) {
          for (const auto& [figure, r] : b->second) xb.push_back(r);
        }
        if (xa.size() < 2 || xb.size() < 2) continue;
        const TTestResult t = mean_diff_ttest(xa, xb, tmode);
        auto avg = [](const std::vector<double>& v) {
          double s = 0;
          for (double x : v) s += x;
          return s / static_cast<double>(v.size());
        };
        tcsv += a->first + "," + b->first + "," + number(avg(xa), 3) + "," +
                number(avg(xb), 3) + "," +
                (t.defined ? number(t.t) + "," + number(t.df) + "," + number(t.p)
                           : std::string(",,")) +
                "\n";
      }
    }
    write_file(out / "ttest.csv", tcsv);
    std::cout << tcsv;
  }

  if (!votes_path.empty()) {
    const auto votes = read_votes(votes_path);
    std::string csv = "system_id,majority_count,mean_votes\n";
    for (const VoteTallyRow& row : worst_vote_tally(votes)) {
      csv += row.system_id + "," + std::to_string(row.majority_count) + "," +
             number(row.mean_votes, 2) + "\n";
    }
    write_file(out / "votes.csv", csv);
    std::cout << csv;
  }

  if (!predictions_path.empty()) {
    std::map<std::string, std::vector<double>> lengths;
    for (const PredictionRecord& p : read_predictions(predictions_path)) {
      lengths[p.system_id].push_back(static_cast<double>(token_length(p.text)));
    }
    const LengthDistribution dist = length_distribution(lengths);
    for (const std::string& w : dist.warnings) std::cerr << "warning: " << w << "\n";
    write_file(out / "distribution.csv", format_distribution_csv(dist));
    write_file(out / "histogram.csv", format_histogram_csv(dist));
  }
  return 0;
}

int run_goldeval(const Common& c, std::string gold_path) {
  if (gold_path.empty()) gold_path = (data_dir(c) / "mentions_gold.tsv").string();
  const auto gold = load_gold_set(gold_path);
  if (gold.empty()) throw Error("gold set is empty");
  const DetectorScore s = evaluate_detector(gold);
  std::cout << "sentences: " << gold.size() << "\ntp: " << s.true_positives
            << "\nfp: " << s.false_positives << "\nfn: " << s.false_negatives
            << "\nprecision: " << number(s.precision, 4)
            << "\nrecall: " << number(s.recall, 4) << "\n";
  if (s.precision < kGoldPrecision || s.recall < kGoldRecall) {
    std::cerr << "below threshold (precision >= " << kGoldPrecision
              << ", recall >= " << kGoldRecall << ")\n";
    return 1;
  }
  return 0;
}

int run_serve(const std::string& store, const std::string& host, int port,
              const HttpOptions& options) {
  AnnotationService service(store);
  std::cout << "serving on http://" << host << ":" << port << "\n" << std::flush;
  return run_annotation_server(service, host, port, options);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"figure caption corpus and evaluation toolkit"};
  app.require_subcommand(1);
  Common c;
  auto common = [&c](CLI::App* sub, bool windows) {
    sub->add_option("--data-dir", c.data_dir, "corpus directory (default $FIGCAP_DATA_DIR)");
    sub->add_option("--out-dir", c.out_dir, "output directory");
    sub->add_option("--seed", c.seed, "global random seed");
    if (windows) sub->add_option("--window", c.windows, "window n,m (repeatable)");
  };

  bool resplit = false;
  int better_min = 0;
  auto* extract = app.add_subcommand("extract", "build a corpus and its mention index");
  common(extract, false);
  extract->add_flag("--resplit", resplit, "assign paper-level 80/10/10 splits");
  extract->add_option("--better", better_min,
                      "also write the subset of captions with at least N tokens");

  auto* mentions = app.add_subcommand("mentions", "detect figure mentions");
  common(mentions, false);

  std::vector<std::string> kinds;
  std::vector<int> ks, targets;
  auto* baseline = app.add_subcommand("baseline", "reuse and random baselines");
  common(baseline, true);
  baseline->add_option("--kind", kinds, "reuse source kind (M, P, Mention, ...)");
  baseline->add_option("--random-k", ks, "random sentence counts")->check(CLI::Range(1, 10));
  baseline->add_option("--truncate", targets, "truncation lengths");

  int seed_count = 10;
  auto* curve = app.add_subcommand("curve", "random-score curves");
  common(curve, false);
  curve->add_option("--metrics", c.metrics, "comma-separated native metrics");
  curve->add_option("--seed-count", seed_count, "seeds seed..seed+N-1");

  std::string systems, external, beam_ratings;
  std::vector<std::string> curve_paths;
  auto* score = app.add_subcommand("score", "length-normalized scoring");
  common(score, false);
  score->add_option("--systems", systems, "predictions.jsonl")->required();
  score->add_option("--curve", curve_paths, "curve.json (repeatable)")->required();
  score->add_option("--metrics", c.metrics, "metrics to report");
  score->add_option("--external", external, "external_scores.jsonl");
  score->add_option("--beams", beam_ratings, "ratings.jsonl defining quality beams");

  std::vector<std::string> coverage_kinds;
  std::string alignments;
  auto* coverage = app.add_subcommand("coverage", "caption/source coverage");
  common(coverage, true);
  coverage->add_option("--kind", coverage_kinds, "source kind (repeatable)");
  coverage->add_option("--alignments", alignments, "alignments.jsonl");
  coverage->add_option("--stopwords", c.stopwords, "stopword list id or file");

  auto* overlap = app.add_subcommand("overlap", "mention/caption BLEU-4 grid");
  common(overlap, false);

  std::string ratings, rankings, votes, predictions, ttest = "welch", pooling = "pooled";
  auto* analyze = app.add_subcommand("analyze", "annotation statistics");
  common(analyze, false);
  analyze->add_option("--ratings", ratings, "ratings.jsonl");
  analyze->add_option("--rankings", rankings, "rankings.jsonl");
  analyze->add_option("--votes", votes, "votes.jsonl");
  analyze->add_option("--predictions", predictions, "predictions.jsonl for length KDE");
  analyze->add_option("--ttest", ttest, "welch or paired")
      ->check(CLI::IsMember({"welch", "paired"}));
  analyze->add_option("--pooling", pooling, "pooled or per-figure")
      ->check(CLI::IsMember({"pooled", "per-figure"}));

  std::string gold;
  auto* goldeval = app.add_subcommand("goldeval", "mention detector precision/recall");
  goldeval->add_option("--data-dir", c.data_dir, "directory holding mentions_gold.tsv");
  goldeval->add_option("--gold", gold, "gold TSV");

  std::string store = "annotation-store", host = "127.0.0.1";
  int port = 8080;
  HttpOptions http;
  std::string task_root, static_dir, image_dir;
  auto* serve = app.add_subcommand("serve", "annotation HTTP service");
  serve->add_option("--store", store, "annotation store directory");
  serve->add_option("--tasks", task_root, "directory task files resolve against");
  serve->add_option("--static", static_dir, "web UI bundle");
  serve->add_option("--images", image_dir, "figure images");
  serve->add_option("--host", host, "bind address");
  serve->add_option("--port", port, "port");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (*extract) return run_extract(c, resplit, better_min);
    if (*mentions) return run_mentions(c);
    if (*baseline) return run_baseline(c, kinds, ks, targets);
    if (*curve) return run_curve(c, seed_count);
    if (*score) return run_score(c, systems, curve_paths, external, beam_ratings);
    if (*coverage) return run_coverage(c, coverage_kinds, alignments);
    if (*overlap) return run_overlap(c);
    if (*analyze) {
      return run_analyze(c, ratings, rankings, votes, predictions, ttest, pooling);
    }
    if (*goldeval) return run_goldeval(c, gold);
    if (*serve) {
      http.task_root = task_root;
      http.static_dir = static_dir;
      http.image_dir = image_dir;
      return run_serve(store, host, port, http);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
