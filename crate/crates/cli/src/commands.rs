use std::collections::BTreeMap;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use anyhow::{bail, Context, Result};
use mubforge::ff::{make_field, Field, FieldElem};
use mubforge::mub::*;
use mubforge::pauli::EigenReport;
use mubforge::semifield::*;
use mubforge::spread::*;
use serde::Serialize;
use serde_json::Value;

use crate::catalog::{self as listing, default_path};
use crate::{BuildArgs, BuildPath, ModeArgs, Object, OutFormat, Reading};

/// Largest `(n+1)·n²` table entry count written as JSON or CSV.
const EXPORT_LIMIT: u64 = 100_000_000;
/// Largest `n` for which a dual is compared with its cataloged partner on
/// the full product table.
const PARTNER_TABLE_LIMIT: u32 = 729;

fn print_json(value: &impl Serialize) -> Result<()> {
    let mut out = std::io::stdout().lock();
    writeln!(out, "{}", serde_json::to_string_pretty(value)?)?;
    Ok(out.flush()?)
}

fn write_json(path: &Path, value: &impl Serialize) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    fs::write(path, text).with_context(|| format!("writing {}", path.display()))
}

fn read_json(path: &Path) -> Result<Value> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))
}

/// Wall-clock times, kept out of the report so that reruns are byte-identical.
#[derive(Serialize)]
struct Timing {
    command: String,
    threads: usize,
    seconds: BTreeMap<String, f64>,
}

impl Timing {
    fn new(command: &str) -> Self {
        Timing { command: command.into(), threads: rayon::current_num_threads(), seconds: BTreeMap::new() }
    }

    fn time<T>(&mut self, phase: &str, f: impl FnOnce() -> T) -> T {
        let start = Instant::now();
        let out = f();
        self.seconds.insert(phase.into(), start.elapsed().as_secs_f64());
        out
    }

    /// Written next to the output file, or to stderr without one.
    fn emit(&self, out: Option<&Path>) -> Result<()> {
        match out {
            Some(p) => {
                let mut name = p.as_os_str().to_owned();
                name.push(".timing.json");
                write_json(&PathBuf::from(name), self)
            }
            None => {
                eprintln!("timing: {}", serde_json::to_string(self)?);
                Ok(())
            }
        }
    }
}

pub fn list_catalog(text: bool) -> Result<bool> {
    let c = listing::catalog();
    if text {
        print!("{}", listing::render_text(&c));
    } else {
        print_json(&c)?;
    }
    Ok(true)
}

fn field_for(q: u32, modulus: Option<&[u32]>) -> Result<Field> {
    if q < 2 {
        bail!("q = {q} is not a prime power");
    }
    let p = (2..=q).find(|d| q.is_multiple_of(*d)).expect("q >= 2");
    let (mut rest, mut r) = (q, 0);
    while rest % p == 0 {
        rest /= p;
        r += 1;
    }
    if rest != 1 {
        bail!("q = {q} is not a prime power");
    }
    Ok(make_field(p, r, modulus)?)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Source {
    Catalog(Family),
    Bblp,
    Suzuki,
    CoulterMatthews,
    PseudoPlanar,
}

fn source(name: &str) -> Result<Source> {
    Ok(match name {
        "bblp" => Source::Bblp,
        "suzuki" => Source::Suzuki,
        "coulter-matthews" => Source::CoulterMatthews,
        "pseudo-planar" => Source::PseudoPlanar,
        _ => match Family::from_name(name) {
            Some(f) if f != Family::Derived => Source::Catalog(f),
            _ => bail!("unknown family {name:?}; see `mubforge catalog`"),
        },
    })
}

fn path_name(p: BuildPath) -> &'static str {
    match p {
        BuildPath::Symplectic => "symplectic",
        BuildPath::Commutative => "commutative",
        BuildPath::PseudoPlanar => "pseudo-planar",
    }
}

fn reading(r: Reading, family: Family) -> PwReading {
    match r {
        Reading::Verbatim => PwReading::verbatim(family),
        Reading::Plain => PwReading { grouped_ninth: false, grouped_cube: false },
        Reading::Grouped => PwReading { grouped_ninth: true, grouped_cube: true },
        Reading::GroupedNinth => PwReading { grouped_ninth: true, grouped_cube: false },
        Reading::GroupedCube => PwReading { grouped_ninth: false, grouped_cube: true },
    }
}

fn params(args: &BuildArgs, family: Family) -> Params {
    Params { k: args.k, j: args.nonsquare.clone(), reading: args.reading.map(|r| reading(r, family)) }
}

fn monomials(field: &Field, specs: &[String]) -> Result<Vec<Monomial>> {
    if specs.is_empty() {
        bail!("pseudo-planar needs at least one --monomial c,i,j");
    }
    specs
        .iter()
        .map(|s| {
            let parts: Vec<u32> = s
                .split(',')
                .map(|t| t.trim().parse::<u32>())
                .collect::<Result<_, _>>()
                .with_context(|| format!("--monomial {s:?}: expected c,i,j"))?;
            let [c, i, j] = parts[..] else { bail!("--monomial {s:?}: expected c,i,j") };
            if c >= field.q() {
                bail!("--monomial {s:?}: coefficient index {c} is not below q = {}", field.q());
            }
            Ok(Monomial { coeff: FieldElem::from_index(c), i, j })
        })
        .collect()
}

fn pseudo_planar_fn(field: &Field, args: &BuildArgs) -> Result<PlanarFn> {
    let ms = monomials(field, &args.monomials)?;
    let label = format!("pseudo-planar q={} {}", field.q(), args.monomials.join(" "));
    Ok(PlanarFn::from_monomials(field, ms, PlanarKind::PseudoPlanar, label))
}

fn coulter_matthews(field: &Field, k: Option<u32>) -> Result<PlanarFn> {
    let r = field.r() as u32;
    let k = match k {
        Some(k) => k,
        None => (2..=2 * r)
            .find(|&k| gcd(k, 2 * r) == 1 && k % (2 * r) != 1 && k % (2 * r) != 2 * r - 1)
            .with_context(|| format!("no admissible k for q = {}", field.q()))?,
    };
    Ok(PlanarFn::coulter_matthews(field, k)?)
}

fn gcd(a: u32, b: u32) -> u32 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

#[derive(Serialize)]
struct Construction {
    family: String,
    q: u32,
    #[serde(skip_serializing_if = "Option::is_none")]
    path: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    params: Option<Params>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    monomials: Vec<String>,
    /// Set when the object was built from another cataloged product.
    #[serde(skip_serializing_if = "Option::is_none")]
    via: Option<String>,
    label: String,
}

impl Construction {
    fn new(args: &BuildArgs, field: &Field) -> Self {
        Construction {
            family: args.family.clone(),
            q: field.q(),
            path: None,
            params: None,
            monomials: args.monomials.clone(),
            via: None,
            label: String::new(),
        }
    }
}

fn verify_mode(m: &ModeArgs, auto: VerifyMode) -> VerifyMode {
    if m.full {
        VerifyMode::Full
    } else if let Some(samples) = m.samples {
        VerifyMode::Sampled { samples, seed: m.seed }
    } else {
        match auto {
            VerifyMode::Full => VerifyMode::Full,
            VerifyMode::Sampled { samples, .. } => VerifyMode::Sampled { samples, seed: m.seed },
        }
    }
}

fn check_mode(m: &ModeArgs) -> CheckMode {
    if m.full {
        CheckMode::Exhaustive
    } else if let Some(samples) = m.samples {
        CheckMode::Sampled { samples, seed: m.seed }
    } else {
        CheckMode::Auto
    }
}

fn spread_samples(m: &ModeArgs) -> u64 {
    m.samples.unwrap_or(DEFAULT_PAIR_SAMPLES)
}

fn build_mub_set(args: &BuildArgs, field: &Field, c: &mut Construction) -> Result<MubSet> {
    let odd = field.p() != 2;
    let ms = match source(&args.family)? {
        Source::Catalog(family) => {
            let params = params(args, family);
            let s = catalog(field, family, &params)?;
            c.params = Some(s.params().clone()).filter(|p| *p != Params::default());
            let path = args.path.unwrap_or(if default_path(family) == "commutative" {
                BuildPath::Commutative
            } else {
                BuildPath::Symplectic
            });
            c.path = Some(path_name(path).into());
            match (path, odd) {
                (BuildPath::Symplectic, true) => {
                    let s = if s.is_symplectic() {
                        s
                    } else if !family.is_pair() {
                        c.via = Some("knuth dual".into());
                        knuth_dual_odd(&s)?
                    } else {
                        let partner = family.partner().expect("pair families have partners");
                        c.via = Some(format!("cataloged partner {partner}"));
                        let pp = Params { reading: args.reading.map(|r| reading(r, partner)), ..params };
                        catalog(field, partner, &pp)?
                    };
                    build_odd_symplectic(&s)?
                }
                (BuildPath::Commutative, true) => {
                    if !s.is_commutative() || family.is_pair() {
                        bail!("the planar path needs a commutative product on F, {family} is not one");
                    }
                    build_odd_planar(&planar_from_presemifield(&s)?)?
                }
                (BuildPath::Symplectic, false) => build_even_symplectic(&s)?,
                (BuildPath::Commutative, false) => build_even_commutative(&s)?,
                (BuildPath::PseudoPlanar, _) => bail!("--path pseudo-planar needs --family pseudo-planar"),
            }
        }
        Source::PseudoPlanar => {
            let f = pseudo_planar_fn(field, args)?;
            let path = args.path.unwrap_or(BuildPath::PseudoPlanar);
            c.path = Some(path_name(path).into());
            match path {
                BuildPath::PseudoPlanar => build_pseudoplanar(&f)?,
                BuildPath::Commutative => build_even_commutative(&comm_from_pseudoplanar(&f)?.product)?,
                BuildPath::Symplectic => {
                    c.via = Some("knuth dual".into());
                    build_even_symplectic(&knuth_dual_even(&comm_from_pseudoplanar(&f)?.product)?)?
                }
            }
        }
        Source::CoulterMatthews => {
            if matches!(args.path, Some(p) if p != BuildPath::Commutative) {
                bail!("coulter-matthews only has the planar path");
            }
            c.path = Some("commutative".into());
            build_odd_planar(&coulter_matthews(field, args.k)?)?
        }
        Source::Bblp => {
            if matches!(args.path, Some(p) if p != BuildPath::Symplectic) {
                bail!("bblp only has the symplectic path");
            }
            c.params = Some(Params { k: Some(args.k.unwrap_or(1)), ..Params::default() });
            build_bblp(field, args.k.unwrap_or(1))?
        }
        Source::Suzuki => {
            if matches!(args.path, Some(p) if p != BuildPath::Symplectic) {
                bail!("suzuki only has the symplectic path");
            }
            build_suzuki(field)?
        }
    };
    c.label = ms.provenance().to_string();
    Ok(ms)
}

fn export_size(ms: &MubSet) -> u64 {
    let n = u64::from(ms.n());
    (ms.bases().len() as u64) * n * n
}

fn write_mub(ms: &MubSet, format: OutFormat, out: Option<&Path>) -> Result<()> {
    if export_size(ms) > EXPORT_LIMIT {
        bail!("{} table entries exceed the export limit {EXPORT_LIMIT}", export_size(ms));
    }
    match (format, out) {
        (OutFormat::Json, Some(p)) => write_json(p, &ms.to_json()),
        (OutFormat::Json, None) => print_json(&ms.to_json()),
        (OutFormat::Csv, Some(p)) => {
            let mut w = std::io::BufWriter::new(fs::File::create(p).with_context(|| format!("creating {}", p.display()))?);
            ms.write_csv(&mut w)?;
            Ok(w.flush()?)
        }
        (OutFormat::Csv, None) => {
            let stdout = std::io::stdout();
            let mut w = std::io::BufWriter::new(stdout.lock());
            ms.write_csv(&mut w)?;
            Ok(w.flush()?)
        }
    }
}

#[derive(Serialize)]
struct MubReport {
    command: String,
    construction: Construction,
    n: u32,
    bases: usize,
    verification: VerificationReport,
    #[serde(skip_serializing_if = "Option::is_none")]
    eigenvectors: Option<EigenReport>,
    passed: bool,
}

#[derive(Serialize)]
struct SpreadBuildReport {
    command: String,
    construction: Construction,
    spread: SpreadReport,
    passed: bool,
}

#[derive(Serialize)]
struct PresemifieldReport {
    command: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    construction: Option<Construction>,
    label: String,
    axioms: AxiomReport,
    /// `[x, y, m]` with `tr(x·(y∘m)) != tr((x∘m)·y)`.
    isotropy_failure: Option<[u32; 3]>,
    symplectic: bool,
    passed: bool,
}

fn presemifield_report(command: &str, construction: Option<Construction>, s: &Presemifield, mode: CheckMode) -> PresemifieldReport {
    let axioms = verify_presemifield(s, mode);
    let isotropy_failure = symplectic_failure(s).map(|(x, y, m)| [x, y, m]);
    PresemifieldReport {
        command: command.into(),
        construction,
        label: s.label().into(),
        passed: axioms.passed,
        axioms,
        symplectic: isotropy_failure.is_none(),
        isotropy_failure,
    }
}

pub fn build(args: &BuildArgs) -> Result<bool> {
    let field = field_for(args.q, args.modulus.as_deref())?;
    let mut c = Construction::new(args, &field);
    match args.object {
        Object::Mub => {
            let mut timing = Timing::new("build mub");
            let ms = timing.time("construction", || build_mub_set(args, &field, &mut c))?;
            let mode = verify_mode(&args.mode, VerifyMode::auto(ms.n()));
            let verification = timing.time("verification", || verify_mub(&ms, mode));
            let eigenvectors = if args.eigen {
                let mode = verify_mode(&ModeArgs { samples: None, ..args.mode.clone() }, VerifyMode::eigen_auto(ms.n()));
                Some(timing.time("eigenvectors", || check_mub_eigenvectors(&ms, mode))?)
            } else {
                None
            };
            if let Some(out) = &args.out {
                timing.time("export", || write_mub(&ms, args.format, Some(out)))?;
            }
            let passed = verification.passed && eigenvectors.as_ref().is_none_or(|e| e.passed);
            let report = MubReport {
                command: "build mub".into(),
                construction: c,
                n: ms.n(),
                bases: ms.bases().len(),
                verification,
                eigenvectors,
                passed,
            };
            print_json(&report)?;
            timing.emit(args.out.as_deref())?;
            Ok(passed)
        }
        Object::Spread => {
            if args.format == OutFormat::Csv {
                bail!("spreads are only written as JSON");
            }
            let mut timing = Timing::new("build spread");
            let (sp, symplectic) = timing.time("construction", || -> Result<(Spread, bool)> {
                Ok(match source(&args.family)? {
                    Source::Catalog(family) => {
                        let s = catalog(&field, family, &params(args, family))?;
                        c.params = Some(s.params().clone()).filter(|p| *p != Params::default());
                        (spread_from_presemifield(&s), s.is_symplectic())
                    }
                    Source::Bblp => {
                        c.params = Some(Params { k: Some(args.k.unwrap_or(1)), ..Params::default() });
                        (bblp_spread(&field, args.k.unwrap_or(1))?, true)
                    }
                    Source::Suzuki => (suzuki_spread(&field)?, true),
                    Source::CoulterMatthews | Source::PseudoPlanar => {
                        bail!("{} has no spread construction; build its mub set instead", args.family)
                    }
                })
            })?;
            c.label = sp.provenance().to_string();
            let samples = spread_samples(&args.mode);
            let report = timing.time("verification", || {
                if symplectic {
                    is_symplectic_with(&sp, samples, args.mode.seed)
                } else {
                    is_spread_with(&sp, samples, args.mode.seed)
                }
            });
            if let Some(out) = &args.out {
                write_json(out, &sp.to_json())?;
            }
            let passed = report.passed;
            print_json(&SpreadBuildReport { command: "build spread".into(), construction: c, spread: report, passed })?;
            timing.emit(args.out.as_deref())?;
            Ok(passed)
        }
        Object::Presemifield => {
            if args.format == OutFormat::Csv {
                bail!("presemifields are only written as JSON");
            }
            let mut timing = Timing::new("build presemifield");
            let s = timing.time("construction", || -> Result<Presemifield> {
                Ok(match source(&args.family)? {
                    Source::Catalog(family) => catalog(&field, family, &params(args, family))?,
                    Source::PseudoPlanar => comm_from_pseudoplanar(&pseudo_planar_fn(&field, args)?)?.product,
                    _ => bail!("{} is not a presemifield family", args.family),
                })
            })?;
            c.params = Some(s.params().clone()).filter(|p| *p != Params::default());
            c.label = s.label().into();
            let report = timing.time("verification", || presemifield_report("build presemifield", Some(c), &s, check_mode(&args.mode)));
            if let Some(out) = &args.out {
                write_json(out, &s.descriptor())?;
            }
            let passed = report.passed;
            print_json(&report)?;
            timing.emit(args.out.as_deref())?;
            Ok(passed)
        }
    }
}

enum Loaded {
    Mub(MubSet),
    Spread(Spread),
    Presemifield(Presemifield),
}

fn load(path: &Path) -> Result<Loaded> {
    let v = read_json(path)?;
    let ctx = || format!("{} does not match its schema", path.display());
    let obj = v.as_object().with_context(|| format!("{}: expected a JSON object", path.display()))?;
    if obj.contains_key("bases") {
        let j: MubSetJson = serde_json::from_value(v).with_context(ctx)?;
        Ok(Loaded::Mub(MubSet::from_json(&j).with_context(ctx)?))
    } else if obj.contains_key("members") {
        let j: SpreadJson = serde_json::from_value(v).with_context(ctx)?;
        Ok(Loaded::Spread(Spread::from_json(&j).with_context(ctx)?))
    } else if obj.contains_key("field") && obj.contains_key("dim") {
        let j: PresemifieldDescriptor = serde_json::from_value(v).with_context(ctx)?;
        Ok(Loaded::Presemifield(j.build().with_context(ctx)?))
    } else {
        bail!("{}: not a MUB set, spread or presemifield", path.display())
    }
}

fn load_mub(path: &Path) -> Result<MubSet> {
    match load(path)? {
        Loaded::Mub(ms) => Ok(ms),
        _ => bail!("{} is not a MUB set", path.display()),
    }
}

#[derive(Serialize)]
struct SpreadVerifyReport {
    command: String,
    spread: SpreadReport,
    symplectic: bool,
    passed: bool,
}

pub fn verify(path: &Path, mode: &ModeArgs) -> Result<bool> {
    match load(path)? {
        Loaded::Mub(ms) => {
            let rep = verify_mub(&ms, verify_mode(mode, VerifyMode::auto(ms.n())));
            print_json(&rep)?;
            Ok(rep.passed)
        }
        Loaded::Spread(sp) => {
            // A spread that is not totally isotropic is still a valid spread.
            let mut spread = is_spread_with(&sp, spread_samples(mode), mode.seed);
            spread.symplectic_checked = true;
            spread.isotropy_failure = isotropy_failure(&sp);
            let (symplectic, passed) = (spread.isotropy_failure.is_none(), spread.passed);
            print_json(&SpreadVerifyReport { command: "verify".into(), spread, symplectic, passed })?;
            Ok(passed)
        }
        Loaded::Presemifield(s) => {
            let rep = presemifield_report("verify", None, &s, check_mode(mode));
            print_json(&rep)?;
            Ok(rep.passed)
        }
    }
}

#[derive(Serialize)]
struct DualReport {
    command: String,
    source: String,
    dual: PresemifieldReport,
    #[serde(skip_serializing_if = "Option::is_none")]
    catalog_partner: Option<String>,
    /// Product tables of the dual and the cataloged partner agree.
    #[serde(skip_serializing_if = "Option::is_none")]
    matches_catalog_partner: Option<bool>,
    descriptor: PresemifieldDescriptor,
    passed: bool,
}

pub fn dual(path: &Path, mode: &ModeArgs, out: Option<&Path>) -> Result<bool> {
    let Loaded::Presemifield(s) = load(path)? else { bail!("{} is not a presemifield", path.display()) };
    let d = if s.field().p() == 2 { knuth_dual_even(&s)? } else { knuth_dual_odd(&s)? };
    let partner = s.family().partner().filter(|_| s.family() != Family::Derived);
    let matches = match partner {
        Some(p) if d.space().n() <= PARTNER_TABLE_LIMIT => {
            let c = catalog(s.field(), p, s.params())?;
            let n = d.space().n();
            Some((0..n).all(|x| (0..n).all(|y| c.mul(x, y) == d.mul(x, y))))
        }
        _ => None,
    };
    let report = presemifield_report("dual", None, &d, check_mode(mode));
    let passed = report.passed && report.symplectic && matches != Some(false);
    let descriptor = d.descriptor();
    if let Some(out) = out {
        write_json(out, &descriptor)?;
    }
    print_json(&DualReport {
        command: "dual".into(),
        source: s.label().into(),
        dual: report,
        catalog_partner: partner.map(|p| p.name().into()),
        matches_catalog_partner: matches,
        descriptor,
        passed,
    })?;
    Ok(passed)
}

pub fn compare(a: &Path, b: &Path) -> Result<bool> {
    let rep = compare_mub_sets(&load_mub(a)?, &load_mub(b)?);
    print_json(&rep)?;
    Ok(rep.identical)
}

pub fn export(path: &Path, format: OutFormat, out: Option<&Path>) -> Result<bool> {
    write_mub(&load_mub(path)?, format, out)?;
    Ok(true)
}
