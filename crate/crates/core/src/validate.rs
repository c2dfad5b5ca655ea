//! Corpus-scale comparison of the pipeline against the exact oracle.

use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::generate::{random_gnm, random_gnp, random_permutation, rng};
use crate::graph::Graph;
use crate::oracle::{enumerate_graphs, orbits_on, find_isomorphism, isomorphism_classes, OracleConfig};
use crate::partition::{verify_babel_lemmas, LemmaReport, OrderedPartition};
use crate::pipeline::{decide_detailed, prepare, DecisionDetail, IsoDecision, IsoMode, Prepared};

/// Largest `n` for the all-pairs exhaustive corpus.
pub const MAX_EXHAUSTIVE_PAIR_N: usize = 5;

/// Graphs plus index pairs into them.
pub type Corpus = (Vec<Graph>, Vec<(usize, usize)>);

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum CorpusSpec {
    /// Every labeled graph on `n` vertices, every unordered pair including
    /// self-pairs.
    Exhaustive { n: usize },
    /// `pairs` pairs on `n` vertices: even-numbered pairs are a random graph
    /// and a random relabeling of it, odd-numbered pairs two random graphs
    /// with equal edge counts.
    Random { n: usize, pairs: usize, seed: u64 },
    /// Explicit pairs.
    Pairs { label: String, pairs: Vec<(Graph, Graph)> },
}

impl CorpusSpec {
    pub fn label(&self) -> String {
        match self {
            CorpusSpec::Exhaustive { n } => format!("exhaustive-n{n}"),
            CorpusSpec::Random { n, pairs, seed } => format!("random-n{n}-p{pairs}-s{seed}"),
            CorpusSpec::Pairs { label, .. } => label.clone(),
        }
    }

    pub fn materialize(&self) -> Result<Corpus> {
        match self {
            CorpusSpec::Exhaustive { n } => {
                if *n > MAX_EXHAUSTIVE_PAIR_N {
                    return Err(Error::BudgetExceeded(format!(
                        "exhaustive pair corpora are limited to n <= {MAX_EXHAUSTIVE_PAIR_N}, got {n}"
                    )));
                }
                let graphs: Vec<Graph> = enumerate_graphs(*n)?.collect();
                let k = graphs.len();
                let pairs = (0..k).flat_map(|i| (i..k).map(move |j| (i, j))).collect();
                Ok((graphs, pairs))
            }
            CorpusSpec::Random { n, pairs, seed } => {
                let mut r = rng(*seed);
                let mut graphs = Vec::with_capacity(2 * pairs);
                for k in 0..*pairs {
                    let g = random_gnp(*n, 0.5, &mut r);
                    let h = if k % 2 == 0 {
                        let pi = random_permutation(*n, &mut r);
                        g.permuted(&pi)
                    } else {
                        random_gnm(*n, g.m(), &mut r)
                    };
                    graphs.push(g);
                    graphs.push(h);
                }
                Ok((graphs, (0..*pairs).map(|k| (2 * k, 2 * k + 1)).collect()))
            }
            CorpusSpec::Pairs { pairs, .. } => {
                let graphs: Vec<Graph> = pairs.iter().flat_map(|(a, b)| [a.clone(), b.clone()]).collect();
                Ok((graphs, (0..pairs.len()).map(|k| (2 * k, 2 * k + 1)).collect()))
            }
        }
    }
}

#[derive(Clone, Debug)]
pub struct ValidateOptions {
    pub execution: Execution,
    pub oracle: OracleConfig,
    /// Directory receiving counterexample files; none are written without it.
    pub out_dir: Option<PathBuf>,
}

impl Default for ValidateOptions {
    fn default() -> Self {
        ValidateOptions {
            execution: Execution::default(),
            oracle: OracleConfig::from_env(),
            out_dir: None,
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct ModeReport {
    pub mode: String,
    pub agree: usize,
    pub disagree: usize,
    pub inconclusive: usize,
    pub agreement_rate: f64,
    pub isomorphic_decisions: usize,
    /// Isomorphic decisions whose mapping re-verifies on the inputs.
    pub reverified: usize,
    pub not_isomorphic_size: usize,
    pub not_isomorphic_signature: usize,
    pub not_isomorphic_alignment: usize,
    /// Graphs where Booth's reduction was applied.
    pub booth_applied: usize,
    /// Graphs whose reduced core is an extended-class member.
    pub reduced_members: usize,
    pub reducer_failures: usize,
    pub max_rounds: usize,
    pub max_reduced_vertices: usize,
    /// Marked mode only: isomorphic decisions where the first full-adjacency
    /// alignment failed on the inputs and the search had to be repeated.
    pub first_alignment_unverified: usize,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct OrbitComparison {
    pub compared: usize,
    pub agree: usize,
    pub disagree: usize,
    /// Members above the oracle guard.
    pub skipped: usize,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct LemmaSummary {
    pub graphs: usize,
    pub passed: usize,
    pub failed: usize,
    pub lemma1_checks: usize,
    pub lemma2_checks: usize,
    pub lemma3_checks: usize,
}

impl LemmaSummary {
    pub fn add(&mut self, r: &LemmaReport) {
        self.graphs += 1;
        if r.passed() {
            self.passed += 1;
        } else {
            self.failed += 1;
        }
        self.lemma1_checks += r.lemma1.checked;
        self.lemma2_checks += r.lemma2.checked;
        self.lemma3_checks += r.lemma3.checked;
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CorpusReport {
    pub corpus: String,
    pub graphs: usize,
    pub pairs: usize,
    pub oracle_isomorphic_pairs: usize,
    /// Isomorphism classes among the graphs (exhaustive corpora only).
    pub oracle_classes: Option<usize>,
    pub modes: Vec<ModeReport>,
    /// Partition cells against automorphism orbits of the unmarked reduced
    /// graphs, both restricted to the input vertices.
    pub orbits: OrbitComparison,
    pub lemmas: LemmaSummary,
    pub counterexamples: Vec<String>,
}

impl CorpusReport {
    /// Every isomorphic decision re-verified.
    pub fn sound(&self) -> bool {
        self.modes.iter().all(|m| m.reverified == m.isomorphic_decisions)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ValidationReport {
    pub corpora: Vec<CorpusReport>,
}

impl ValidationReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn sound(&self) -> bool {
        self.corpora.iter().all(CorpusReport::sound)
    }
}

pub fn validate(specs: &[CorpusSpec], opts: &ValidateOptions) -> Result<ValidationReport> {
    let corpora = specs.iter().map(|s| validate_corpus(s, opts)).collect::<Result<_>>()?;
    Ok(ValidationReport { corpora })
}

struct Archive<'a> {
    dir: Option<&'a Path>,
    label: String,
    written: Vec<String>,
}

impl Archive<'_> {
    fn put(&mut self, name: String, body: &str) -> Result<()> {
        let file = format!("{}-{name}", self.label);
        if let Some(dir) = self.dir {
            std::fs::create_dir_all(dir)
                .and_then(|_| std::fs::write(dir.join(&file), body))
                .map_err(|e| Error::PreconditionFailed(format!("cannot write {file}: {e}")))?;
        }
        self.written.push(file);
        Ok(())
    }
}

/// Cells of `p` cut down to the vertices below `n`, in orbit-partition form.
fn restrict(p: &OrderedPartition, n: usize) -> Vec<Vec<usize>> {
    let mut cells: Vec<Vec<usize>> = p
        .unordered()
        .into_iter()
        .map(|c| c.into_iter().filter(|&v| v < n).collect::<Vec<_>>())
        .filter(|c| !c.is_empty())
        .collect();
    cells.sort();
    cells
}

pub fn validate_corpus(spec: &CorpusSpec, opts: &ValidateOptions) -> Result<CorpusReport> {
    let (graphs, pairs) = spec.materialize()?;
    let ex = opts.execution;
    let truth: Vec<bool> = ex.map(&pairs, |&(i, j)| find_isomorphism(&graphs[i], &graphs[j]).is_some());
    let mut archive = Archive {
        dir: opts.out_dir.as_deref(),
        label: spec.label(),
        written: Vec::new(),
    };

    let mut modes = Vec::new();
    let mut orbits = OrbitComparison::default();
    let mut lemmas = LemmaSummary::default();
    for mode in IsoMode::ALL {
        let prepared: Vec<Result<Prepared>> = ex.map(&graphs, |g| prepare(g, mode, Execution::Sequential));
        let decisions: Vec<DecisionDetail> = ex.map(&pairs, |&(i, j)| match (&prepared[i], &prepared[j]) {
            (Ok(a), Ok(b)) if graphs[i].n() == graphs[j].n() && graphs[i].m() == graphs[j].m() => {
                decide_detailed(&graphs[i], a, &graphs[j], b, mode)
            }
            (Ok(_), Ok(_)) => DecisionDetail {
                decision: IsoDecision::NotIsomorphic(crate::pipeline::NonIsoReason::SizeMismatch),
                first_alignment_verified: None,
            },
            (Err(e), _) | (_, Err(e)) => DecisionDetail {
                decision: IsoDecision::Inconclusive(e.to_string()),
                first_alignment_verified: None,
            },
        });

        let mut rep = ModeReport {
            mode: mode.name().to_string(),
            ..Default::default()
        };
        for p in &prepared {
            match p {
                Ok(p) => {
                    rep.reduced_members += 1;
                    rep.booth_applied += p.trace.booth_applied as usize;
                    rep.max_rounds = rep.max_rounds.max(p.trace.rounds.len());
                    rep.max_reduced_vertices = rep.max_reduced_vertices.max(p.marked.graph.n());
                }
                Err(_) => rep.reducer_failures += 1,
            }
        }
        for (k, (d, &(i, j))) in decisions.iter().zip(&pairs).enumerate() {
            use crate::pipeline::NonIsoReason::*;
            match &d.decision {
                IsoDecision::Isomorphic(m) => {
                    rep.isomorphic_decisions += 1;
                    rep.reverified += m.is_isomorphism(&graphs[i], &graphs[j]) as usize;
                }
                IsoDecision::NotIsomorphic(SizeMismatch) => rep.not_isomorphic_size += 1,
                IsoDecision::NotIsomorphic(SignatureMismatch) => rep.not_isomorphic_signature += 1,
                IsoDecision::NotIsomorphic(AlignmentFailed) => rep.not_isomorphic_alignment += 1,
                IsoDecision::Inconclusive(_) => {}
            }
            if d.first_alignment_verified == Some(false) {
                rep.first_alignment_unverified += 1;
            }
            match d.decision.verdict() {
                None => rep.inconclusive += 1,
                Some(v) if v == truth[k] => rep.agree += 1,
                Some(_) => {
                    rep.disagree += 1;
                    let stem = format!("{}-pair{k}", mode.name());
                    archive.put(format!("{stem}-a.el"), &graphs[i].to_edge_list_text())?;
                    archive.put(format!("{stem}-b.el"), &graphs[j].to_edge_list_text())?;
                    for (side, p) in [("a", &prepared[i]), ("b", &prepared[j])] {
                        if let Ok(p) = p {
                            archive.put(format!("{stem}-{side}.trace.json"), &p.trace.to_json())?;
                        }
                    }
                }
            }
        }
        rep.agreement_rate = if pairs.is_empty() { 1.0 } else { rep.agree as f64 / pairs.len() as f64 };
        modes.push(rep);

        if mode == IsoMode::Alignment {
            let members: Vec<usize> = (0..graphs.len()).filter(|&i| prepared[i].is_ok()).collect();
            let checks: Vec<(Option<bool>, LemmaReport)> = ex.map(&members, |&i| {
                let p = prepared[i].as_ref().expect("member");
                let g = &p.marked.graph;
                let interest: Vec<usize> = (0..p.marked.input_n).collect();
                let orbit = orbits_on(g, &interest, &opts.oracle)
                    .ok()
                    .map(|o| o.cells() == restrict(&p.partition, p.marked.input_n).as_slice());
                let lem = verify_babel_lemmas(g, &p.partition).expect("regular simplicial by construction");
                (orbit, lem)
            });
            for (&i, (orbit, lem)) in members.iter().zip(&checks) {
                let p = prepared[i].as_ref().expect("member");
                match orbit {
                    None => orbits.skipped += 1,
                    Some(true) => {
                        orbits.compared += 1;
                        orbits.agree += 1;
                    }
                    Some(false) => {
                        orbits.compared += 1;
                        orbits.disagree += 1;
                        archive.put(format!("orbit-g{i}.el"), &graphs[i].to_edge_list_text())?;
                        archive.put(format!("orbit-g{i}.partition.json"), &serde_json::to_string(&p.partition).expect("json"))?;
                    }
                }
                lemmas.add(lem);
                if !lem.passed() {
                    archive.put(format!("lemma-g{i}.el"), &graphs[i].to_edge_list_text())?;
                    archive.put(format!("lemma-g{i}.report.json"), &serde_json::to_string(lem).expect("json"))?;
                }
            }
        }
    }

    let oracle_classes = matches!(spec, CorpusSpec::Exhaustive { .. }).then(|| {
        isomorphism_classes(&graphs).into_iter().max().map_or(0, |c| c + 1)
    });
    Ok(CorpusReport {
        corpus: spec.label(),
        graphs: graphs.len(),
        pairs: pairs.len(),
        oracle_isomorphic_pairs: truth.iter().filter(|&&t| t).count(),
        oracle_classes,
        modes,
        orbits,
        lemmas,
        counterexamples: archive.written,
    })
}
