//! `amrsmith`: one binary wiring the AMR toolkit into reproducible corpus
//! workflows. Results go to files or stdout, progress and the resolved
//! configuration to stderr. Exit codes: 0 success, 1 usage, 2 data error.

mod config;
mod io_util;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;

use amrsmith_core::corpus::{collect_corpus, BlockReader};
use amrsmith_core::graph::Layout;
use amrsmith_core::metrics::{fine_grained, MetricKind};
use amrsmith_core::postprocess::{
    pipeline, Gazetteer, HttpLinker, NameLinker, PipelineOptions, PruneMethod, StageLog,
};
use amrsmith_core::preprocess::{
    alphabetical_reordering, best_reordering, clean_sentence, double_data, parse_alignments,
    remove_variables, strip_wiki, Alignment, AlignmentFormat, PairOrderStats, SentenceRecord,
};
use amrsmith_core::silver::{curate, MixSpec};
use amrsmith_core::smatch::{micro_average, pair_seed, smatch_with, ScoreOptions, ScoreReport};
use amrsmith_core::tokenize::{
    build_vocab, decode_amr, encode_amr, encode_sentence, line_to_tokens, parse_tag_sidecar,
    tokens_to_line, AmrEncodeOptions,
};
use amrsmith_core::{AmrGraph, VariableFreeTree};

use config::ConfigFile;
use io_util::{read_lines, read_to_string, writer_for};

#[derive(Parser)]
#[command(
    name = "amrsmith",
    version,
    about = "AMR parsing, SMATCH scoring and seq2seq pre/postprocessing"
)]
struct Cli {
    /// Global RNG seed (config key: seed)
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Worker threads; 0 uses all cores (config key: jobs)
    #[arg(long, global = true)]
    jobs: Option<usize>,
    /// Flat `key = value` config file; command-line flags win
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Suppress progress and config logging on stderr
    #[arg(long, global = true)]
    quiet: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Validate a corpus and re-serialize it
    Parse(ParseArgs),
    /// Print the triple form of every AMR in a corpus
    Triples(TriplesArgs),
    /// Score predictions against gold AMRs
    Smatch(SmatchArgs),
    /// Turn gold AMR-sentence pairs into seq2seq training text
    Preprocess(PreprocessArgs),
    /// Encode sentences or AMR lines as character/super-character tokens
    Tokenize(TokenizeArgs),
    /// Repair and restore raw model output into valid AMRs
    Postprocess(PostprocessArgs),
    /// Curate silver training data from two parsers' outputs
    Silver(SilverArgs),
    /// Postprocess raw output and score it against gold in one step
    PipelineEval(PipelineEvalArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum LayoutArg {
    Single,
    Indented,
}

impl From<LayoutArg> for Layout {
    fn from(l: LayoutArg) -> Layout {
        match l {
            LayoutArg::Single => Layout::SingleLine,
            LayoutArg::Indented => Layout::Indented,
        }
    }
}

#[derive(Args)]
struct ParseArgs {
    /// Corpus file (`-` for stdin)
    #[arg(long)]
    corpus: PathBuf,
    #[arg(long, value_enum, default_value = "indented")]
    layout: LayoutArg,
    /// Output file; stdout when omitted
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct TriplesArgs {
    #[arg(long)]
    corpus: PathBuf,
    /// Keep `-of` relation labels as written instead of inverting them
    #[arg(long)]
    literal: bool,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy)]
struct MetricKindArg(MetricKind);

impl std::str::FromStr for MetricKindArg {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        s.parse().map(MetricKindArg)
    }
}

#[derive(Args)]
struct SmatchArgs {
    #[arg(long)]
    pred: PathBuf,
    #[arg(long)]
    gold: PathBuf,
    /// Hill-climbing restarts (config key: restarts)
    #[arg(long)]
    restarts: Option<usize>,
    /// Fine-grained metric instead of plain smatch
    #[arg(long)]
    metric: Option<MetricKindArg>,
    /// Print a per-pair TSV before the summary line
    #[arg(long)]
    per_pair: bool,
    /// Rewrite `x :rel-of y` as `y :rel x` on both sides before scoring
    #[arg(long)]
    invert_of: bool,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ReorderArg {
    None,
    Best,
    Alpha,
    Consistency,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum AlignFormatArg {
    Jamr,
    Tsv,
}

#[derive(Args)]
struct PreprocessArgs {
    #[arg(long)]
    corpus: PathBuf,
    /// Remove `:wiki` relations before linearizing
    #[arg(long)]
    strip_wiki: bool,
    #[arg(long, value_enum, default_value = "none")]
    reorder: ReorderArg,
    /// Append the best-reordered variant of every record
    #[arg(long)]
    double: bool,
    #[arg(long, value_enum, default_value = "jamr")]
    alignments_format: AlignFormatArg,
    /// Sidecar alignment file (blank-line separated records)
    #[arg(long)]
    alignments: Option<PathBuf>,
    #[arg(long)]
    out_amr: PathBuf,
    #[arg(long)]
    out_snt: PathBuf,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum TokenizeMode {
    Amr,
    Sent,
}

#[derive(Args)]
struct TokenizeArgs {
    #[arg(long, value_enum)]
    mode: TokenizeMode,
    #[arg(long = "in")]
    in_file: PathBuf,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    super_relations: bool,
    /// Insert POS-tag super characters (requires --tags)
    #[arg(long)]
    pos: bool,
    #[arg(long)]
    depth_parens: bool,
    /// POS sidecar: `token<TAB>tag` lines, blank line between sentences
    #[arg(long)]
    tags: Option<PathBuf>,
    /// Write a `symbol<TAB>count` vocabulary report
    #[arg(long)]
    vocab: Option<PathBuf>,
    /// Decode token lines back to text instead of encoding
    #[arg(long)]
    decode: bool,
}

#[derive(Args)]
struct PostprocessArgs {
    #[arg(long = "in")]
    in_file: PathBuf,
    #[arg(long)]
    out: PathBuf,
    /// Pruning method 1-4; 0 disables (config key: prune)
    #[arg(long)]
    prune: Option<u8>,
    #[arg(long)]
    no_coref: bool,
    /// Gazetteer TSV (`name<TAB>title`) enabling wikification
    #[arg(long)]
    wiki: Option<PathBuf>,
    /// HTTP entity-linking endpoint enabling wikification
    #[arg(long)]
    wiki_url: Option<String>,
    /// Write a TSV change log: line, stage, action, detail
    #[arg(long)]
    log: Option<PathBuf>,
}

#[derive(Args)]
struct SilverArgs {
    #[arg(long)]
    camr: PathBuf,
    #[arg(long)]
    jamr: PathBuf,
    #[arg(long)]
    total: usize,
    #[arg(long)]
    camr_fraction: f64,
    /// Pairwise SMATCH threshold on the 0-100 scale (config key: threshold)
    #[arg(long)]
    threshold: Option<f64>,
    /// Keep pairs at exactly the threshold too
    #[arg(long)]
    inclusive: bool,
    #[arg(long)]
    out: PathBuf,
    #[arg(long)]
    report: PathBuf,
}

#[derive(Args)]
struct PipelineEvalArgs {
    /// Raw model output, one line per gold record
    #[arg(long)]
    raw: PathBuf,
    #[arg(long)]
    gold: PathBuf,
    #[arg(long)]
    prune: Option<u8>,
    #[arg(long)]
    no_coref: bool,
    #[arg(long)]
    wiki: Option<PathBuf>,
    #[arg(long)]
    wiki_url: Option<String>,
    #[arg(long)]
    restarts: Option<usize>,
    /// Print the full fine-grained metric table
    #[arg(long)]
    breakdown: bool,
    #[arg(long)]
    log: Option<PathBuf>,
    #[arg(long)]
    per_pair: bool,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

/// Globals resolved from CLI flags and the config file.
struct Resolved {
    seed: u64,
    quiet: bool,
    config: ConfigFile,
}

impl Resolved {
    fn log(&self, key: &str, value: impl std::fmt::Display) {
        if !self.quiet {
            eprintln!("# {key} = {value}");
        }
    }

    fn score_options(&self, restarts: Option<usize>, invert_of: bool) -> ScoreOptions {
        ScoreOptions {
            restarts: restarts
                .or_else(|| self.config.get_parsed("restarts"))
                .unwrap_or(4),
            seed: self.seed,
            invert_of,
        }
    }
}

fn run(cli: Cli) -> Result<()> {
    let config = match &cli.config {
        Some(path) => ConfigFile::load(path)?,
        None => ConfigFile::default(),
    };
    let resolved = Resolved {
        seed: cli.seed.or_else(|| config.get_parsed("seed")).unwrap_or(0),
        quiet: cli.quiet || config.get_parsed("quiet").unwrap_or(false),
        config,
    };
    let jobs: usize = cli
        .jobs
        .or_else(|| resolved.config.get_parsed("jobs"))
        .unwrap_or(0);
    resolved.log("seed", resolved.seed);
    resolved.log("jobs", jobs);

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .context("building thread pool")?;
    pool.install(|| dispatch(cli.command, &resolved))
}

fn dispatch(command: Command, ctx: &Resolved) -> Result<()> {
    match command {
        Command::Parse(args) => cmd_parse(args, ctx),
        Command::Triples(args) => cmd_triples(args, ctx),
        Command::Smatch(args) => cmd_smatch(args, ctx),
        Command::Preprocess(args) => cmd_preprocess(args, ctx),
        Command::Tokenize(args) => cmd_tokenize(args, ctx),
        Command::Postprocess(args) => cmd_postprocess(args, ctx),
        Command::Silver(args) => cmd_silver(args, ctx),
        Command::PipelineEval(args) => cmd_pipeline_eval(args, ctx),
    }
}

fn load_corpus(path: &std::path::Path) -> Result<Vec<AmrGraph>> {
    let text = read_to_string(path)?;
    let (graphs, errors) = collect_corpus(text.as_bytes())?;
    if let Some(first) = errors.first() {
        bail!(
            "{} malformed block(s) in {}; first: {first}",
            errors.len(),
            path.display()
        );
    }
    Ok(graphs)
}

fn cmd_parse(args: ParseArgs, ctx: &Resolved) -> Result<()> {
    ctx.log("command", "parse");
    let text = read_to_string(&args.corpus)?;
    let (graphs, errors) = collect_corpus(text.as_bytes())?;
    let mut out = writer_for(args.out.as_deref())?;
    for g in &graphs {
        out.write_all(g.to_corpus_block(args.layout.into()).as_bytes())?;
        out.write_all(b"\n")?;
    }
    out.flush()?;
    for e in &errors {
        eprintln!("{e}");
    }
    ctx.log("parsed", graphs.len());
    if !errors.is_empty() {
        bail!("{} malformed block(s)", errors.len());
    }
    Ok(())
}

fn cmd_triples(args: TriplesArgs, ctx: &Resolved) -> Result<()> {
    ctx.log("command", "triples");
    let graphs = load_corpus(&args.corpus)?;
    let mut out = writer_for(args.out.as_deref())?;
    for g in &graphs {
        let ts = if args.literal {
            amrsmith_core::to_triples_literal(g)
        } else {
            amrsmith_core::to_triples(g)
        };
        for t in ts.iter() {
            writeln!(out, "{t}")?;
        }
        writeln!(out)?;
    }
    out.flush()?;
    Ok(())
}

fn score_pairs(
    preds: &[AmrGraph],
    golds: &[AmrGraph],
    metric: Option<MetricKind>,
    opts: &ScoreOptions,
) -> Vec<ScoreReport> {
    preds
        .par_iter()
        .zip(golds.par_iter())
        .enumerate()
        .map(|(i, (p, g))| {
            let pair_opts = ScoreOptions {
                seed: pair_seed(opts.seed, i),
                ..*opts
            };
            match metric {
                None | Some(MetricKind::Smatch) => smatch_with(p, g, &pair_opts).0,
                Some(metric) => fine_grained(p, g, metric, &pair_opts),
            }
        })
        .collect()
}

fn cmd_smatch(args: SmatchArgs, ctx: &Resolved) -> Result<()> {
    ctx.log("command", "smatch");
    let opts = ctx.score_options(args.restarts, args.invert_of);
    ctx.log("restarts", opts.restarts);
    let preds = load_corpus(&args.pred)?;
    let golds = load_corpus(&args.gold)?;
    if preds.len() != golds.len() {
        bail!(
            "corpora differ in length: {} predicted vs {} gold",
            preds.len(),
            golds.len()
        );
    }
    if preds.is_empty() {
        bail!("empty corpus");
    }
    let metric = args.metric.map(|m| m.0);
    if let Some(m) = metric {
        ctx.log("metric", m.name());
    }
    let per_pair = score_pairs(&preds, &golds, metric, &opts);
    if args.per_pair {
        for (i, r) in per_pair.iter().enumerate() {
            println!("{i}\t{:.4}\t{:.4}\t{:.4}", r.precision, r.recall, r.f);
        }
    }
    println!("{}", micro_average(&per_pair));
    Ok(())
}

fn record_sentence(g: &AmrGraph) -> SentenceRecord {
    let raw = g.meta("snt").or_else(|| g.meta("tok")).unwrap_or("");
    clean_sentence(raw)
}

fn cmd_preprocess(args: PreprocessArgs, ctx: &Resolved) -> Result<()> {
    ctx.log("command", "preprocess");
    let text = read_to_string(&args.corpus)?;
    let (graphs, errors) = collect_corpus(text.as_bytes())?;
    for e in &errors {
        eprintln!("skipping {e}");
    }
    let sidecar: Vec<String> = match &args.alignments {
        Some(path) => read_to_string(path)?
            .split("\n\n")
            .map(str::to_string)
            .collect(),
        None => Vec::new(),
    };
    let format = match args.alignments_format {
        AlignFormatArg::Jamr => AlignmentFormat::Jamr,
        AlignFormatArg::Tsv => AlignmentFormat::Tsv,
    };

    let mut records = Vec::new();
    for (i, g) in graphs.iter().enumerate() {
        let sentence = record_sentence(g);
        let graph = if args.strip_wiki {
            strip_wiki(g)
        } else {
            g.clone()
        };
        let (tree, warnings) = remove_variables(&graph);
        for w in warnings {
            eprintln!("record {i}: cyclic reference through `{}` cut", w.var);
        }
        let meta = if args.alignments.is_some() {
            sidecar.get(i).cloned().unwrap_or_default()
        } else {
            g.meta("alignments").unwrap_or("").to_string()
        };
        let align = match parse_alignments(&meta, format) {
            Ok(a) => a,
            Err(e) => {
                eprintln!("record {i}: {e}; treating as unaligned");
                Alignment::default()
            }
        };
        records.push((sentence, tree, align));
    }

    match args.reorder {
        ReorderArg::None => {}
        ReorderArg::Best => {
            for (_, tree, align) in records.iter_mut() {
                let (t, a) = best_reordering(tree, align);
                *tree = t;
                *align = a;
            }
        }
        ReorderArg::Alpha => {
            for (_, tree, _) in records.iter_mut() {
                *tree = alphabetical_reordering(tree);
            }
        }
        ReorderArg::Consistency => {
            let mut stats = PairOrderStats::default();
            for (_, tree, _) in &records {
                stats.observe(tree);
            }
            for (_, tree, _) in records.iter_mut() {
                *tree = stats.consistency_reordering(tree);
            }
        }
    }

    let pairs: Vec<(SentenceRecord, VariableFreeTree)> = if args.double {
        double_data(&records)
    } else {
        records.into_iter().map(|(s, t, _)| (s, t)).collect()
    };

    let mut out_amr = writer_for(Some(&args.out_amr))?;
    let mut out_snt = writer_for(Some(&args.out_snt))?;
    for (sentence, tree) in &pairs {
        writeln!(out_amr, "{}", tree.serialize(Layout::SingleLine))?;
        writeln!(out_snt, "{}", sentence.cleaned)?;
    }
    out_amr.flush()?;
    out_snt.flush()?;
    ctx.log("records", pairs.len());
    Ok(())
}

fn cmd_tokenize(args: TokenizeArgs, ctx: &Resolved) -> Result<()> {
    ctx.log("command", "tokenize");
    let lines = read_lines(&args.in_file)?;
    let mut out = writer_for(args.out.as_deref())?;

    if args.decode {
        for line in &lines {
            writeln!(out, "{}", decode_amr(&line_to_tokens(line)))?;
        }
        out.flush()?;
        return Ok(());
    }

    let sequences: Vec<Vec<String>> = match args.mode {
        TokenizeMode::Amr => {
            let opts = AmrEncodeOptions {
                super_relations: args.super_relations,
                depth_parens: args.depth_parens,
            };
            lines.iter().map(|l| encode_amr(l, &opts)).collect()
        }
        TokenizeMode::Sent => {
            if args.pos && args.tags.is_none() {
                bail!("--pos requires --tags");
            }
            let tag_blocks = match &args.tags {
                Some(path) => parse_tag_sidecar(&read_to_string(path)?),
                None => Vec::new(),
            };
            let mut seqs = Vec::new();
            for (i, line) in lines.iter().enumerate() {
                let mut record = clean_sentence(line);
                if args.pos {
                    let block = tag_blocks
                        .get(i)
                        .with_context(|| format!("no tag block for sentence {i}"))?;
                    if block.len() != record.tokens.len() {
                        bail!(
                            "sentence {i}: {} tokens but {} tags",
                            record.tokens.len(),
                            block.len()
                        );
                    }
                    record.tags = Some(block.iter().map(|(_, tag)| tag.clone()).collect());
                }
                seqs.push(encode_sentence(&record, args.pos));
            }
            seqs
        }
    };

    for seq in &sequences {
        writeln!(out, "{}", tokens_to_line(seq))?;
    }
    out.flush()?;

    if let Some(vocab_path) = &args.vocab {
        let vocab = build_vocab(sequences.iter());
        let mut vout = writer_for(Some(vocab_path))?;
        for (symbol, count) in vocab.by_frequency() {
            writeln!(vout, "{symbol}\t{count}")?;
        }
        vout.flush()?;
        ctx.log("vocab_size", vocab.size());
    }
    Ok(())
}

fn build_linker(
    wiki: &Option<PathBuf>,
    wiki_url: &Option<String>,
) -> Result<Option<Box<dyn NameLinker>>> {
    match (wiki, wiki_url) {
        (Some(_), Some(_)) => bail!("--wiki and --wiki-url are mutually exclusive"),
        (Some(path), None) => {
            let gaz = Gazetteer::from_tsv_path(path)?;
            Ok(Some(Box::new(gaz)))
        }
        (None, Some(url)) => {
            let linker = HttpLinker::new(url).map_err(anyhow::Error::msg)?;
            Ok(Some(Box::new(linker)))
        }
        (None, None) => Ok(None),
    }
}

fn pipeline_options(
    prune_flag: Option<u8>,
    no_coref: bool,
    ctx: &Resolved,
) -> Result<PipelineOptions> {
    let prune_num = prune_flag
        .or_else(|| ctx.config.get_parsed("prune"))
        .unwrap_or(4);
    let prune = match prune_num {
        0 => None,
        n => Some(
            PruneMethod::from_number(n).with_context(|| format!("--prune must be 0-4, got {n}"))?,
        ),
    };
    Ok(PipelineOptions {
        prune,
        restore_coref: !no_coref,
    })
}

fn run_pipeline_lines(
    lines: &[String],
    opts: &PipelineOptions,
    linker: Option<&dyn NameLinker>,
) -> Vec<(AmrGraph, Vec<StageLog>)> {
    lines
        .par_iter()
        .map(|line| pipeline(line, opts, linker))
        .collect()
}

fn write_stage_log(path: &std::path::Path, results: &[(AmrGraph, Vec<StageLog>)]) -> Result<()> {
    let mut out = writer_for(Some(path))?;
    for (i, (_, logs)) in results.iter().enumerate() {
        for log in logs {
            writeln!(out, "{i}\t{}\t{}\t{}", log.stage, log.action, log.detail)?;
        }
    }
    out.flush()?;
    Ok(())
}

fn cmd_postprocess(args: PostprocessArgs, ctx: &Resolved) -> Result<()> {
    ctx.log("command", "postprocess");
    let opts = pipeline_options(args.prune, args.no_coref, ctx)?;
    ctx.log("coref", !args.no_coref);
    let linker = build_linker(&args.wiki, &args.wiki_url)?;
    let lines = read_lines(&args.in_file)?;
    let results = run_pipeline_lines(&lines, &opts, linker.as_deref());
    let mut out = writer_for(Some(&args.out))?;
    for (graph, _) in &results {
        writeln!(out, "{}\n", graph.serialize(Layout::SingleLine))?;
    }
    out.flush()?;
    if let Some(log_path) = &args.log {
        write_stage_log(log_path, &results)?;
    }
    ctx.log("lines", results.len());
    Ok(())
}

fn cmd_silver(args: SilverArgs, ctx: &Resolved) -> Result<()> {
    ctx.log("command", "silver");
    let threshold = args
        .threshold
        .or_else(|| ctx.config.get_parsed("threshold"))
        .unwrap_or(55.0);
    ctx.log("threshold", threshold);
    ctx.log("total", args.total);
    ctx.log("camr_fraction", args.camr_fraction);
    let read_blocks = |path: &std::path::Path| -> Result<Vec<String>> {
        let text = read_to_string(path)?;
        BlockReader::new(text.as_bytes())
            .map(|b| Ok(b?.1))
            .collect()
    };
    let camr_blocks = read_blocks(&args.camr)?;
    let jamr_blocks = read_blocks(&args.jamr)?;
    let spec = MixSpec {
        total: args.total,
        camr_fraction: args.camr_fraction,
        seed: ctx.seed,
    };
    let score_opts = ScoreOptions {
        restarts: 4,
        seed: ctx.seed,
        invert_of: false,
    };
    let (selected, report) = curate(
        &camr_blocks,
        &jamr_blocks,
        &spec,
        threshold,
        args.inclusive,
        &score_opts,
    )?;
    let mut out = writer_for(Some(&args.out))?;
    for (sentence, graph, source) in &selected {
        writeln!(out, "# ::snt {sentence}")?;
        writeln!(out, "# ::parser {}", source.name())?;
        writeln!(out, "{}\n", graph.serialize(Layout::SingleLine))?;
    }
    out.flush()?;
    let mut report_out = writer_for(Some(&args.report))?;
    serde_json::to_writer_pretty(&mut report_out, &report)?;
    report_out.write_all(b"\n")?;
    report_out.flush()?;
    ctx.log("kept", report.kept);
    ctx.log("selected", selected.len());
    Ok(())
}

fn cmd_pipeline_eval(args: PipelineEvalArgs, ctx: &Resolved) -> Result<()> {
    ctx.log("command", "pipeline-eval");
    let opts = pipeline_options(args.prune, args.no_coref, ctx)?;
    let linker = build_linker(&args.wiki, &args.wiki_url)?;
    let score_opts = ctx.score_options(args.restarts, false);
    let raw_lines = read_lines(&args.raw)?;
    let golds = load_corpus(&args.gold)?;
    if raw_lines.len() != golds.len() {
        bail!(
            "alignment mismatch: {} raw lines vs {} gold records",
            raw_lines.len(),
            golds.len()
        );
    }
    let results = run_pipeline_lines(&raw_lines, &opts, linker.as_deref());
    if let Some(log_path) = &args.log {
        write_stage_log(log_path, &results)?;
    }
    let preds: Vec<AmrGraph> = results.into_iter().map(|(g, _)| g).collect();
    let per_pair = score_pairs(&preds, &golds, None, &score_opts);
    if args.per_pair {
        for (i, r) in per_pair.iter().enumerate() {
            println!("{i}\t{:.4}\t{:.4}\t{:.4}", r.precision, r.recall, r.f);
        }
    }
    if args.breakdown {
        for metric in MetricKind::ALL {
            let reports = score_pairs(&preds, &golds, Some(metric), &score_opts);
            let summary = micro_average(&reports);
            println!(
                "{}\t{:.4}\t{:.4}\t{:.4}",
                metric.name(),
                summary.precision,
                summary.recall,
                summary.f
            );
        }
    }
    println!("{}", micro_average(&per_pair));
    Ok(())
}
