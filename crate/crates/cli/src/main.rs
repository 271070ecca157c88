use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use trackalg::brackets::{massey_product, toda_bracket, transfer_check, BoundedB, BracketProblem, MooreDg};
use trackalg::fixtures::io::{self, Instance, SHIPPED};
use trackalg::laws::{replay, Budget, Law, Report, Witness, DEFAULT_SEED};
use trackalg::linearity::{annihilating_prime, iterated_laws, linearity_laws};
use trackalg::pseudo::{build_pseudo_integral, build_pseudo_padic, BuildOptions, Bounded, BuiltPseudo, PseudoFunctor};
use trackalg::strictify::{build_b, strictify_pipeline, PipelineOptions, Relaxation, TableForm, TableSource};
use trackalg::trackcat::{axiom_laws, HomotopyCategory};

const SCHEMA: &str = "trackalg/report";
const SCHEMA_VERSION: u32 = 1;
/// Longest word searched when checking that the graph generates `H0`.
const GENERATING_SEARCH: usize = 4;

#[derive(Parser)]
#[command(name = "trackalg", version, about = "Checks and constructions on finite track categories")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Track category axioms and the linearity track equations.
    Validate(Common),
    /// Linearity track equations, iterated tracks and Γ(n) identities.
    Linearity(Common),
    /// Pseudo-functor, 𝔹, σ and the relaxation zigzag.
    Strictify(StrictifyArgs),
    /// Toda bracket, Massey products and their transfer.
    Brackets(BracketArgs),
    /// Relaxation of a bilinear instance and its Dwyer–Kan verdicts.
    Zigzag(ZigzagArgs),
    /// Shipped fixtures.
    Fixtures {
        #[command(subcommand)]
        command: FixturesCommand,
    },
}

#[derive(Subcommand)]
enum FixturesCommand {
    /// Print a shipped instance file, or write it with `--out`.
    Gen {
        name: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
enum Format {
    Human,
    Json,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
enum RingChoice {
    /// ℤ/p² with p the prime killing every map.
    Zpp,
    /// ℤ.
    Z,
}

#[derive(Args)]
struct Common {
    instance: PathBuf,
    /// Samples per object tuple when a case space is too large to exhaust.
    #[arg(long, env = "TRACKALG_BUDGET", default_value_t = 4096)]
    budget: usize,
    /// Case spaces up to this size are checked exhaustively.
    #[arg(long, default_value_t = 1 << 16)]
    exhaustive_limit: u128,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
    #[arg(long, value_enum, default_value_t = Format::Human)]
    format: Format,
    /// Re-evaluate a witness (JSON) against the law it names.
    #[arg(long)]
    replay: Option<PathBuf>,
}

impl Common {
    fn budget(&self) -> Budget {
        Budget {
            exhaustive_limit: self.exhaustive_limit,
            samples: self.budget,
            seed: self.seed,
        }
    }
}

#[derive(Args)]
struct StrictifyArgs {
    #[command(flatten)]
    common: Common,
    #[arg(long, value_enum, default_value_t = RingChoice::Zpp)]
    ring: RingChoice,
    /// Longest word of letters in the relaxation.
    #[arg(long, default_value_t = 2)]
    word_bound: usize,
    /// Longest generating word used as one letter.
    #[arg(long, default_value_t = 1)]
    letter_bound: usize,
    /// Longest word in the bounded maps used for law checks.
    #[arg(long, default_value_t = 1)]
    bound: usize,
    /// Coefficients of bounded maps, comma separated; all residues if unset.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    coeffs: Option<Vec<i64>>,
}

#[derive(Args)]
struct BracketArgs {
    #[command(flatten)]
    common: Common,
    /// Three class selectors `y1,y2,y3`; each is `0` or a `+`-sum of generator names.
    #[arg(long, value_delimiter = ',')]
    classes: Vec<String>,
    /// Objects `o0,o1,o2,o3` with `y1: o1 -> o0`, `y2: o2 -> o1`, `y3: o3 -> o2`.
    #[arg(long, value_delimiter = ',', default_value = "0,0,0,0")]
    objects: Vec<usize>,
    /// Word bound for bounded maps of 𝔹 when the instance has a graph.
    #[arg(long, default_value_t = 2)]
    bound: usize,
}

#[derive(Args)]
struct ZigzagArgs {
    #[command(flatten)]
    common: Common,
    #[arg(long, default_value_t = 3)]
    word_bound: usize,
}

/// Exit status: `Ok(true)` all checks pass, `Ok(false)` a law failed.
type Outcome = Result<bool, String>;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(2),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}

fn run(cli: Cli) -> Outcome {
    match cli.command {
        Command::Validate(c) => validate(&c),
        Command::Linearity(c) => linearity(&c),
        Command::Strictify(a) => strictify(&a),
        Command::Brackets(a) => brackets(&a),
        Command::Zigzag(a) => zigzag(&a),
        Command::Fixtures {
            command: FixturesCommand::Gen { name, out },
        } => {
            let inst = io::shipped(&name).ok_or_else(|| format!("unknown fixture {name}; known: {}", SHIPPED.join(", ")))?;
            match out {
                Some(path) => io::save(&inst, &path).map_err(|e| e.to_string())?,
                None => print!("{}", io::to_json(&inst)),
            }
            Ok(true)
        }
    }
}

fn load(path: &Path) -> Result<Instance, String> {
    io::load(path).map_err(|e| e.to_string())
}

fn emit(c: &Common, command: &str, inst: &Instance, bounds: Value, result: Value, passed: bool, human: &str) {
    match c.format {
        Format::Json => {
            let out = json!({
                "schema": SCHEMA,
                "version": SCHEMA_VERSION,
                "command": command,
                "instance": inst.category().name(),
                "budget": c.budget(),
                "bounds": bounds,
                "passed": passed,
                "result": result,
            });
            println!("{}", serde_json::to_string_pretty(&out).expect("serializable"));
        }
        Format::Human => {
            println!("{command} {} (seed {:#x}, budget {})", inst.category().name(), c.seed, c.budget);
            print!("{human}");
            println!("{}", if passed { "PASS" } else { "FAIL" });
        }
    }
}

fn summarize(title: &str, r: &Report) -> String {
    let ok = r.laws.iter().filter(|l| l.passed).count();
    let mut s = format!("{title}: {ok}/{} passed\n", r.laws.len());
    for l in &r.laws {
        match &l.witness {
            None => s.push_str(&format!("  ok    {} ({} cases, {:?})\n", l.law, l.cases, l.mode)),
            Some(w) => s.push_str(&format!("  FAIL  {}: {}\n", l.law, w.detail)),
        }
    }
    s
}

fn do_replay(c: &Common, laws: &[Law<'_>]) -> Option<Outcome> {
    let path = c.replay.as_ref()?;
    let text = match std::fs::read_to_string(path) {
        Ok(t) => t,
        Err(e) => return Some(Err(format!("cannot read {}: {e}", path.display()))),
    };
    let w: Witness = match serde_json::from_str(&text) {
        Ok(w) => w,
        Err(e) => return Some(Err(format!("{} is not a witness: {e}", path.display()))),
    };
    Some(match replay(laws, &w) {
        None => Err(format!("no law named {}", w.law)),
        Some(Ok(())) => {
            println!("{}: holds on the witness", w.law);
            Ok(true)
        }
        Some(Err(d)) => {
            println!("{}: fails: {d}", w.law);
            Ok(false)
        }
    })
}

fn validate(c: &Common) -> Outcome {
    let inst = load(&c.instance)?;
    let (t, l) = (inst.category(), inst.linearity());
    let mut laws = axiom_laws(t);
    let k = laws.len();
    laws.extend(linearity_laws(t, l));
    if let Some(r) = do_replay(c, &laws) {
        return r;
    }
    let n = t.num_objects();
    let axioms = trackalg::laws::run_laws(&laws[..k], n, &c.budget());
    let linearity = trackalg::laws::run_laws(&laws[k..], n, &c.budget());
    let passed = axioms.passed() && linearity.passed();
    let eqs: Vec<_> = linearity.laws.iter().filter(|l| l.law.starts_with("eq")).collect();
    let mut human = summarize("axioms", &axioms) + &summarize("linearity", &linearity);
    human.push_str(&format!(
        "linearity track equations: {}/{} passed\n",
        eqs.iter().filter(|l| l.passed).count(),
        eqs.len()
    ));
    emit(c, "validate", &inst, json!({}), json!({"axioms": axioms, "linearity": linearity}), passed, &human);
    Ok(passed)
}

fn linearity(c: &Common) -> Outcome {
    let inst = load(&c.instance)?;
    let (t, l) = (inst.category(), inst.linearity());
    let p = annihilating_prime(t);
    let mut laws = linearity_laws(t, l);
    let k = laws.len();
    laws.extend(iterated_laws(t, l, 4, 3, p));
    if let Some(r) = do_replay(c, &laws) {
        return r;
    }
    let n = t.num_objects();
    let equations = trackalg::laws::run_laws(&laws[..k], n, &c.budget());
    let iterated = trackalg::laws::run_laws(&laws[k..], n, &c.budget());
    let passed = equations.passed() && iterated.passed();
    let human = summarize("linearity equations", &equations) + &summarize("iterated", &iterated);
    emit(
        c,
        "linearity",
        &inst,
        json!({"max_terms": 4, "max_multiple": 3, "p": p}),
        json!({"equations": equations, "iterated": iterated}),
        passed,
        &human,
    );
    Ok(passed)
}

fn pseudo<'a>(inst: &'a Instance, ring: RingChoice) -> Result<BuiltPseudo<'a>, String> {
    let (g, lifts) = inst.generating_graph().map_err(|e| e.to_string())?;
    let (t, l) = (inst.category(), inst.linearity());
    match ring {
        RingChoice::Zpp => {
            let p = annihilating_prime(t).ok_or("--ring zpp needs an instance whose maps are killed by a prime")?;
            build_pseudo_padic(t, l, g, lifts, p as u64, BuildOptions::default(), GENERATING_SEARCH)
        }
        RingChoice::Z => build_pseudo_integral(t, l, g, lifts, BuildOptions::default(), GENERATING_SEARCH),
    }
    .map_err(|e| e.to_string())
}

fn strictify(a: &StrictifyArgs) -> Outcome {
    let c = &a.common;
    if c.replay.is_some() {
        return Err("--replay applies to validate and linearity".into());
    }
    let inst = load(&c.instance)?;
    let p = pseudo(&inst, a.ring)?;
    let options = PipelineOptions {
        bound: a.bound,
        coeffs: a.coeffs.clone(),
        letter_bound: a.letter_bound,
        word_bound: a.word_bound,
        budget: c.budget(),
    };
    let d = strictify_pipeline(&p, &options).map_err(|e| e.to_string())?;
    let passed = d.passed();
    let mut human = summarize("pseudo-functor", &d.coherence) + &summarize("𝔹", &d.b_laws);
    human.push_str(&format!("σ: H0 iso {}, H1 iso {}\n", d.sigma.h0_iso, d.sigma.h1_iso));
    match &d.zigzag {
        Some(z) => {
            human.push_str(&format!(
                "σQ̃ DK {}, Q̃ DK {}, G̃ DK {}, G̃ = σQ̃ {}\n",
                z.sigma_q.equivalence, z.q_equivalence, z.g.equivalence, z.g_is_sigma_q
            ));
            human.push_str(&format!("G̃P̃ = s on {} maps: {}\n", z.gp_cells.checked, z.gp_cells.failure.as_deref().unwrap_or("ok")));
            human.push_str(&format!(
                "G̃P̃ = F on Γ, {} pairs (finding, not gating): {}\n",
                z.gp_gamma.checked,
                z.gp_gamma.failure.as_deref().unwrap_or("ok")
            ));
        }
        None => human.push_str(&format!("zigzag skipped: {}\n", d.zigzag_skipped.as_deref().unwrap_or(""))),
    }
    let bounds = json!({
        "ring": a.ring,
        "bound": a.bound,
        "letter_bound": a.letter_bound,
        "word_bound": a.word_bound,
    });
    emit(c, "strictify", &inst, bounds, serde_json::to_value(&d).expect("serializable"), passed, &human);
    Ok(passed)
}

/// `0`, or a `+`-sum of degree-0 generator names of `Hom(a, b)`.
fn selector(inst: &Instance, a: usize, b: usize, s: &str) -> Result<Vec<i64>, String> {
    let t = inst.category();
    let g = t.hom(a, b).c0();
    let names = inst.labels(a, b).deg0;
    let mut x = g.zero();
    if s.trim() == "0" {
        return Ok(x);
    }
    for part in s.split('+') {
        let part = part.trim();
        let i = names
            .iter()
            .position(|n| n == part)
            .ok_or_else(|| format!("no generator {part} in Hom({a},{b}); known: {}", names.join(", ")))?;
        x = g.add(&x, &g.generator(i));
    }
    Ok(x)
}

fn brackets(a: &BracketArgs) -> Outcome {
    let c = &a.common;
    if c.replay.is_some() {
        return Err("--replay applies to validate and linearity".into());
    }
    let inst = load(&c.instance)?;
    let t = inst.category();
    let n = t.num_objects();
    if a.classes.len() != 3 || a.objects.len() != 4 {
        return Err("--classes takes three selectors and --objects four objects".into());
    }
    let o = [a.objects[0], a.objects[1], a.objects[2], a.objects[3]];
    if o.iter().any(|&x| x >= n) {
        return Err(format!("objects {o:?} out of range for {n} objects"));
    }
    let h = HomotopyCategory::new(t);
    let mut classes = vec![];
    for i in 0..3 {
        let x = selector(&inst, o[i + 1], o[i], &a.classes[i])?;
        classes.push(h.class_of(o[i + 1], o[i], &x));
    }
    let problem = BracketProblem {
        objects: o,
        classes: [classes[0].clone(), classes[1].clone(), classes[2].clone()],
    };
    problem.validate(&h, n).map_err(|e| e.to_string())?;
    let toda = toda_bracket(t, &problem).map_err(|e| e.to_string())?;
    let massey = massey_product(&MooreDg::new(t), &problem).map_err(|e| e.to_string())?;
    let mut passed = toda.classes() == massey.classes() && !toda.elements.is_empty();
    let mut human = format!("problem: objects {:?}, classes {:?}\n", problem.objects, problem.classes);
    human.push_str(&format!("Toda bracket ({} tuples, coset {}):\n", toda.tuples, toda.coset));
    for e in &toda.elements {
        human.push_str(&format!("  {:?}  witness {}\n", e.class, e.witness));
    }
    human.push_str(&format!("Massey product on the Moore complexes agrees: {}\n", toda.classes() == massey.classes()));
    let mut result = json!({"problem": problem, "toda": toda, "massey": massey});
    if inst.graph().is_some() && annihilating_prime(t).is_some() {
        let p = pseudo(&inst, RingChoice::Zpp)?;
        let bounded = Bounded::default_for(p.source(), a.bound);
        let built = build_b(&p, &bounded, &c.budget()).map_err(|e| e.to_string())?;
        let iso = built.sigma.h0_iso && built.sigma.h1_iso;
        let d = BoundedB::new(&built.b, &bounded);
        let tr = transfer_check(&d, &problem, iso).map_err(|e| e.to_string())?;
        passed &= tr.passed();
        human.push_str(&format!(
            "transfer along 𝔹 -> T: {} representatives, identity {}, inclusion {}, equality {:?}\n",
            tr.representatives_checked,
            tr.representative_failure.as_deref().unwrap_or("ok"),
            tr.inclusion,
            tr.equality
        ));
        result["transfer"] = serde_json::to_value(&tr).expect("serializable");
    }
    emit(c, "brackets", &inst, json!({"bound": a.bound}), result, passed, &human);
    Ok(passed)
}

fn zigzag(a: &ZigzagArgs) -> Outcome {
    let c = &a.common;
    if c.replay.is_some() {
        return Err("--replay applies to validate and linearity".into());
    }
    let inst = load(&c.instance)?;
    let t = inst.category();
    let n = t.num_objects();
    let names = (0..n)
        .map(|x| (0..n).map(|y| inst.labels(x, y).deg0).collect())
        .collect();
    let src = TableSource { t, names: Some(names) };
    let rel = Relaxation::new(&src, a.word_bound).map_err(|e| e.to_string())?;
    let identity = TableForm { t, terms: vec![] };
    let report = rel.zigzag_report(&identity);
    let passed = report.passed();
    let human = summarize("zigzag", &report);
    emit(c, "zigzag", &inst, json!({"word_bound": a.word_bound}), json!({"zigzag": report}), passed, &human);
    Ok(passed)
}
