// Copyright 2026 The Distillens Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "distillens/cli.h"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <optional>
#include <ostream>
#include <sstream>
#include <system_error>
#include <vector>

#include <unistd.h>

#include "CLI11.hpp"
#include "distillens/aligner.h"
#include "distillens/calibration.h"
#include "distillens/complexity.h"
#include "distillens/corpus_io.h"
#include "distillens/errors.h"
#include "distillens/parallel.h"
#include "distillens/preorder.h"
#include "distillens/selection.h"
#include "json.hpp"

namespace distillens::cli {

void WriteFileAtomically(const std::filesystem::path &path,
                         const std::function<void(std::ostream &)> &write) {
  std::filesystem::path tmp = path;
  tmp += ".tmp." + std::to_string(::getpid());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open " + path.string() + " for writing");
    try {
      write(out);
      out.flush();
    } catch (...) {
      out.close();
      std::error_code ignored;
      std::filesystem::remove(tmp, ignored);
      throw;
    }
    if (!out) {
      out.close();
      std::error_code ignored;
      std::filesystem::remove(tmp, ignored);
      throw IoError("write failure on " + path.string());
    }
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::error_code ignored;
    std::filesystem::remove(tmp, ignored);
    throw IoError("cannot move output into place at " + path.string() + ": " +
                  ec.message());
  }
}

namespace {

using Json = nlohmann::ordered_json;

struct CommonOptions {
  unsigned threads = DefaultThreads();
  std::optional<unsigned long> seed;  // reserved
};

void AddCommon(CLI::App *cmd, CommonOptions *common) {
  cmd->add_option("--threads", common->threads,
                  "Maximum worker threads (default: available cores)")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--seed", common->seed,
                  "Reserved; every computation is deterministic");
}

void WriteJson(const std::filesystem::path &path, const Json &json) {
  WriteFileAtomically(path, [&](std::ostream &out) {
    out << json.dump(2) << '\n';
  });
}

std::string CsvField(const std::string &s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string quoted = "\"";
  for (char c : s) {
    if (c == '"') quoted += '"';
    quoted += c;
  }
  return quoted + "\"";
}

Json ReportJson(const ComplexityReport &r) {
  Json j;
  j["frs"] = r.frs;
  j["lexical_diversity"] = r.lexical_diversity;
  j["faithfulness"] = r.faithfulness;
  j["sentence_count"] = r.sentence_count;
  return j;
}

void WriteReportCsv(
    const std::filesystem::path &path,
    const std::vector<std::pair<std::string, ComplexityReport>> &rows) {
  WriteFileAtomically(path, [&](std::ostream &out) {
    out << "corpus,sentence_count,frs,lexical_diversity,faithfulness\n";
    for (const auto &[name, r] : rows) {
      out << CsvField(name) << ',' << r.sentence_count << ','
          << FormatDouble(r.frs) << ',' << FormatDouble(r.lexical_diversity)
          << ',' << FormatDouble(r.faithfulness) << '\n';
    }
  });
}

struct AlignedCorpus {
  ParallelCorpus corpus;
  std::vector<Alignment> alignments;
};

AlignedCorpus LoadAligned(const std::string &src, const std::string &tgt,
                          const std::string &align) {
  AlignedCorpus a;
  a.corpus = ReadParallelCorpus(src, tgt);
  a.alignments = ReadAlignments(align);
  try {
    ValidateAlignments(a.corpus, a.alignments);
  } catch (const DomainError &e) {
    throw DomainError(align + ": " + e.what());
  }
  return a;
}

// --- align -----------------------------------------------------------------

struct AlignArgs {
  std::string src, tgt, out, table;
  std::size_t iters = 5;
};

void RunAlign(const AlignArgs &a, const CommonOptions &common,
              std::ostream &err) {
  const ParallelCorpus corpus = ReadParallelCorpus(a.src, a.tgt);
  const Ibm1Result trained =
      TrainIbm1(corpus, {.iterations = a.iters, .threads = common.threads});
  for (std::size_t i = 0; i < trained.log_likelihood.size(); ++i) {
    err << "iteration " << i << " log-likelihood "
        << FormatDouble(trained.log_likelihood[i]) << '\n';
  }
  const std::vector<Alignment> alignments =
      ViterbiAlignCorpus(corpus, trained.table, common.threads);
  WriteFileAtomically(a.out, [&](std::ostream &out) {
    WriteAlignments(out, alignments);
  });
  if (!a.table.empty()) {
    WriteFileAtomically(a.table,
                        [&](std::ostream &out) { trained.table.Write(out); });
  }
}

// --- metrics / report --------------------------------------------------------

struct MetricsArgs {
  std::string src, tgt, align, out, csv;
  std::string real_src, real_tgt, real_align;
  double alpha = kDefaultFaithfulnessAlpha;
};

void RunMetrics(const MetricsArgs &a) {
  const bool any_real =
      !a.real_src.empty() || !a.real_tgt.empty() || !a.real_align.empty();
  const bool all_real =
      !a.real_src.empty() && !a.real_tgt.empty() && !a.real_align.empty();
  if (any_real && !all_real) {
    throw CLI::ValidationError(
        "--real-src, --real-tgt and --real-align must be given together");
  }
  const AlignedCorpus data = LoadAligned(a.src, a.tgt, a.align);
  std::optional<ConditionalTable> reference;
  if (all_real) {
    const AlignedCorpus real = LoadAligned(a.real_src, a.real_tgt, a.real_align);
    reference = ConditionalDistribution(real.corpus, real.alignments);
  }
  const ComplexityReport report =
      ComputeComplexity(data.corpus, data.alignments,
                        reference ? &*reference : nullptr, a.alpha);
  WriteJson(a.out, ReportJson(report));
  if (!a.csv.empty()) WriteReportCsv(a.csv, {{a.tgt, report}});
}

struct ReportArgs {
  std::string real_src, real_tgt, real_align;
  std::string src, tgt, align;
  std::string out, csv;
  double alpha = kDefaultFaithfulnessAlpha;
};

void RunReport(const ReportArgs &a, std::ostream &err) {
  const AlignedCorpus real = LoadAligned(a.real_src, a.real_tgt, a.real_align);
  const AlignedCorpus distilled = LoadAligned(a.src, a.tgt, a.align);
  const ConditionalTable real_table =
      ConditionalDistribution(real.corpus, real.alignments);
  const ComplexityReport real_report =
      ComputeComplexity(real.corpus, real.alignments, &real_table, a.alpha);
  const ComplexityReport distilled_report = ComputeComplexity(
      distilled.corpus, distilled.alignments, &real_table, a.alpha);

  Json json;
  json["alpha"] = a.alpha;
  json["real"] = ReportJson(real_report);
  json["distilled"] = ReportJson(distilled_report);
  Json delta;
  delta["frs"] = distilled_report.frs - real_report.frs;
  delta["lexical_diversity"] =
      distilled_report.lexical_diversity - real_report.lexical_diversity;
  delta["faithfulness"] =
      distilled_report.faithfulness - real_report.faithfulness;
  json["delta"] = delta;
  WriteJson(a.out, json);
  if (!a.csv.empty()) {
    WriteReportCsv(a.csv, {{"real", real_report}, {"distilled", distilled_report}});
  }

  err << std::fixed << std::setprecision(2) << "            FRS   LexDiv  Faith\n"
      << "real       " << std::setw(5) << real_report.frs << "  "
      << std::setw(6) << real_report.lexical_diversity << "  " << std::setw(5)
      << real_report.faithfulness << '\n'
      << "distilled  " << std::setw(5) << distilled_report.frs << "  "
      << std::setw(6) << distilled_report.lexical_diversity << "  "
      << std::setw(5) << distilled_report.faithfulness << '\n';
}

// --- select ------------------------------------------------------------------

struct SelectArgs {
  std::string kbest, ref, src, cxty = "nmt", table, out, scores;
  double lambda = 0.5;
  std::size_t max_ngram = 4;
};

void RunSelect(const SelectArgs &a, const CommonOptions &common) {
  SelectionConfig config;
  config.lambda = a.lambda;
  config.complexity = ParseComplexityKind(a.cxty);
  config.max_ngram = a.max_ngram;
  config.Validate();

  const ParallelCorpus corpus = ReadParallelCorpus(a.src, a.ref);
  const KBestMap kbest = ReadKBest(a.kbest);
  std::optional<TranslationTable> table;
  if (!a.table.empty()) table = TranslationTable::ReadFile(a.table);
  const SelectionResources resources{table ? &*table : nullptr};
  const CorpusSelection selection =
      SelectCorpus(kbest, corpus, config, resources, common.threads);

  WriteFileAtomically(a.out, [&](std::ostream &out) {
    for (const KBestEntry &e : selection.selected) {
      out << JoinTokens(e.hypothesis) << '\n';
    }
  });
  if (!a.scores.empty()) {
    WriteFileAtomically(a.scores, [&](std::ostream &out) {
      out << "sentence_id,rank,nmt_logprob,sim,sim_norm,cxty_raw,cxty_norm,"
             "total,selected,hypothesis\n";
      for (std::size_t s = 0; s < selection.scored.size(); ++s) {
        const std::size_t best = ArgmaxTotal(selection.scored[s]);
        for (const ScoredHypothesis &h : selection.scored[s]) {
          out << s << ',' << h.rank << ',' << FormatDouble(h.entry.nmt_logprob)
              << ',' << FormatDouble(h.sim) << ',' << FormatDouble(h.sim_norm)
              << ',' << FormatDouble(h.cxty_raw) << ','
              << FormatDouble(h.cxty_norm) << ',' << FormatDouble(h.total)
              << ',' << (h.rank == best ? 1 : 0) << ','
              << CsvField(JoinTokens(h.entry.hypothesis)) << '\n';
        }
      }
    });
  }
}

// --- preorder ----------------------------------------------------------------

struct PreorderArgs {
  std::string src, tgt, align, out_src, out_align;
};

void RunPreorder(const PreorderArgs &a) {
  const AlignedCorpus data = LoadAligned(a.src, a.tgt, a.align);
  const PreorderedCorpus reordered =
      PreorderCorpus(data.corpus, data.alignments);
  std::vector<Tokens> sources;
  sources.reserve(reordered.corpus.size());
  for (const SentencePair &p : reordered.corpus.pairs) sources.push_back(p.source);
  WriteFileAtomically(a.out_src,
                      [&](std::ostream &out) { WriteSentences(out, sources); });
  WriteFileAtomically(a.out_align, [&](std::ostream &out) {
    WriteAlignments(out, reordered.alignments);
  });
}

// --- calibrate / attn --------------------------------------------------------

struct CalibrateArgs {
  std::string preds, hyp, ref, out;
  std::size_t bins = kDefaultCalibrationBins;
};

void RunCalibrate(const CalibrateArgs &a, std::ostream &err) {
  if (a.hyp.empty() != a.ref.empty()) {
    throw CLI::ValidationError("--hyp and --ref must be given together");
  }
  std::vector<TokenPredictionRecord> records = ReadTokenPredictions(a.preds);
  if (!a.hyp.empty()) {
    const std::vector<Tokens> hyps = ReadSentences(a.hyp);
    const std::vector<Tokens> refs = ReadSentences(a.ref);
    FillCorrectness(records, hyps, refs);
  }
  const CalibrationReport report = ExpectedCalibrationError(records, a.bins);

  Json json;
  json["accuracy"] = report.accuracy;
  json["confidence"] = report.confidence;
  json["ece"] = report.ece;
  json["token_count"] = report.token_count;
  Json bins = Json::array();
  for (std::size_t b = 0; b < report.bins.size(); ++b) {
    Json bin;
    bin["lower"] = static_cast<double>(b) / static_cast<double>(a.bins);
    bin["upper"] = static_cast<double>(b + 1) / static_cast<double>(a.bins);
    bin["count"] = report.bins[b].count;
    bin["confidence"] = report.bins[b].confidence;
    bin["accuracy"] = report.bins[b].accuracy;
    bins.push_back(bin);
  }
  json["bins"] = bins;
  WriteJson(a.out, json);

  err << std::fixed << std::setprecision(2) << "Acc " << 100.0 * report.accuracy
      << "%  Conf " << 100.0 * report.confidence << "%  ECE "
      << 100.0 * report.ece << "  (" << report.token_count << " tokens)\n";
}

struct AttnArgs {
  std::string attn, out;
};

void RunAttn(const AttnArgs &a) {
  const std::vector<AttentionRecord> records = ReadAttention(a.attn);
  const std::map<std::size_t, double> curve = ConfidenceByIteration(records);
  WriteFileAtomically(a.out, [&](std::ostream &out) {
    out << "iteration,mean_confidence\n";
    for (const auto &[iteration, conf] : curve) {
      out << iteration << ',' << FormatDouble(conf) << '\n';
    }
  });
}

}  // namespace

int Run(std::span<const std::string> args, std::ostream &out,
        std::ostream &err) {
  CLI::App app{"distillens: corpus complexity, distilled-reference selection "
               "and calibration analysis for translation data",
               "distillens"};
  app.require_subcommand(1);
  CommonOptions common;

  AlignArgs align_args;
  CLI::App *align = app.add_subcommand(
      "align", "Train IBM Model 1 and write Viterbi alignments");
  align->add_option("--src", align_args.src, "Source sentences")->required();
  align->add_option("--tgt", align_args.tgt, "Target sentences")->required();
  align->add_option("--iters", align_args.iters, "EM iterations")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  align->add_option("--out", align_args.out, "Pharaoh alignment output")
      ->required();
  align->add_option("--table", align_args.table,
                    "Write the translation table as TSV");
  AddCommon(align, &common);

  MetricsArgs metrics_args;
  CLI::App *metrics = app.add_subcommand(
      "metrics", "FRS, lexical diversity and faithfulness of a corpus");
  metrics->add_option("--src", metrics_args.src)->required();
  metrics->add_option("--tgt", metrics_args.tgt)->required();
  metrics->add_option("--align", metrics_args.align)->required();
  metrics->add_option("--real-src", metrics_args.real_src,
                      "Reference corpus for faithfulness");
  metrics->add_option("--real-tgt", metrics_args.real_tgt);
  metrics->add_option("--real-align", metrics_args.real_align);
  metrics->add_option("--alpha", metrics_args.alpha,
                      "Faithfulness smoothing constant")
      ->capture_default_str();
  metrics->add_option("--out", metrics_args.out, "JSON report")->required();
  metrics->add_option("--csv", metrics_args.csv, "Also write a CSV row");
  AddCommon(metrics, &common);

  SelectArgs select_args;
  CLI::App *select = app.add_subcommand(
      "select", "Select one distilled reference per sentence from k-best lists");
  select->add_option("--kbest", select_args.kbest, "k-best file")->required();
  select->add_option("--ref", select_args.ref, "Original references")
      ->required();
  select->add_option("--src", select_args.src, "Source sentences")->required();
  select->add_option("--lambda", select_args.lambda, "Weight of BLEU")
      ->check(CLI::Range(0.0, 1.0))
      ->capture_default_str();
  select->add_option("--cxty", select_args.cxty, "Complexity: frs|walign|nmt")
      ->check(CLI::IsMember({"frs", "walign", "word_align", "nmt"}))
      ->capture_default_str();
  select->add_option("--table", select_args.table,
                     "Translation table TSV (needed for frs and walign)");
  select->add_option("--max-ngram", select_args.max_ngram)
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  select->add_option("--out", select_args.out, "Selected hypotheses")
      ->required();
  select->add_option("--scores", select_args.scores,
                     "CSV dump of every scored hypothesis");
  AddCommon(select, &common);

  PreorderArgs preorder_args;
  CLI::App *preorder = app.add_subcommand(
      "preorder", "Reorder source words monotonically to the target");
  preorder->add_option("--src", preorder_args.src)->required();
  preorder->add_option("--tgt", preorder_args.tgt)->required();
  preorder->add_option("--align", preorder_args.align)->required();
  preorder->add_option("--out-src", preorder_args.out_src)->required();
  preorder->add_option("--out-align", preorder_args.out_align)->required();
  AddCommon(preorder, &common);

  CalibrateArgs calibrate_args;
  CLI::App *calibrate = app.add_subcommand(
      "calibrate", "Token accuracy, confidence and inference ECE");
  calibrate->add_option("--preds", calibrate_args.preds,
                        "Token predictions (JSON Lines)")
      ->required();
  calibrate->add_option("--hyp", calibrate_args.hyp,
                        "Hypotheses for filling missing correctness flags");
  calibrate->add_option("--ref", calibrate_args.ref, "References");
  calibrate->add_option("--bins", calibrate_args.bins)
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  calibrate->add_option("--out", calibrate_args.out, "JSON report")
      ->required();
  AddCommon(calibrate, &common);

  AttnArgs attn_args;
  CLI::App *attn = app.add_subcommand(
      "attn", "Attention confidence per decoding iteration");
  attn->add_option("--attn", attn_args.attn, "Attention export (JSON Lines)")
      ->required();
  attn->add_option("--out", attn_args.out, "CSV curve")->required();
  AddCommon(attn, &common);

  ReportArgs report_args;
  CLI::App *report = app.add_subcommand(
      "report", "Side-by-side complexity of a real and a distilled corpus");
  report->add_option("--real-src", report_args.real_src)->required();
  report->add_option("--real-tgt", report_args.real_tgt)->required();
  report->add_option("--real-align", report_args.real_align)->required();
  report->add_option("--src", report_args.src, "Distilled source")->required();
  report->add_option("--tgt", report_args.tgt, "Distilled target")->required();
  report->add_option("--align", report_args.align, "Distilled alignments")
      ->required();
  report->add_option("--alpha", report_args.alpha)->capture_default_str();
  report->add_option("--out", report_args.out, "JSON report")->required();
  report->add_option("--csv", report_args.csv, "CSV table");
  AddCommon(report, &common);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
    if (*align) RunAlign(align_args, common, err);
    if (*metrics) RunMetrics(metrics_args);
    if (*select) RunSelect(select_args, common);
    if (*preorder) RunPreorder(preorder_args);
    if (*calibrate) RunCalibrate(calibrate_args, err);
    if (*attn) RunAttn(attn_args);
    if (*report) RunReport(report_args, err);
  } catch (const CLI::ParseError &e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsageError;
  } catch (const IoError &e) {
    err << "distillens: " << e.what() << '\n';
    return kExitUsageError;
  } catch (const std::filesystem::filesystem_error &e) {
    err << "distillens: " << e.what() << '\n';
    return kExitUsageError;
  } catch (const std::exception &e) {
    err << "distillens: " << e.what() << '\n';
    return kExitDomainError;
  }
  return kExitOk;
}

}  // namespace distillens::cli
