use mubforge::semifield::Family;
use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Entry {
    pub name: String,
    /// What `build` produces natively: a presemifield, a spread or a function.
    pub object: String,
    /// `F` or `F+F`.
    pub space: String,
    pub commutative: bool,
    pub symplectic: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub partner: Option<String>,
    pub formula: String,
    pub constraints: String,
    pub native_q: Vec<u32>,
    /// `--path` used by `build mub` when none is given.
    pub default_path: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Catalog {
    pub entries: Vec<Entry>,
}

fn formula(f: Family) -> &'static str {
    match f {
        Family::Field => "x∘y = xy",
        Family::Albert => "x∘y = ½(x^ρ y + x y^ρ), ρ = x^(p^k)",
        Family::AlbertSymplectic => "x∘y = ½(x^ρ y + (xy)^(ρ⁻¹)), ρ = x^(p^k)",
        Family::Bkla => "x∘y = x^(ρ⁻¹) y + (xy)^ρ, ρ = x^(p^k)",
        Family::Dickson => "(a,b)∘(c,d) = (ac + j b^σ d^σ, ad + bc), σ = x^(p^k), j nonsquare",
        Family::Knuth => "(a,b)∘(c,d) = (ac + bd, ad + j^(σ⁻¹) b c^(σ⁻¹)), σ = x^(p^k), j nonsquare",
        Family::CohenGanley => "(a,b)∘(c,d) = (ac + j bd + j³(bd)⁹, ad + bc + j(bd)³), j nonsquare",
        Family::ThasPayne => "(a,b)∘(c,d) = (ac + bd, ad + j bc + j^(1/3)(b c^(1/9) + b d^(1/3))), j nonsquare",
        Family::Ganley => "(a,b)∘(c,d) = (ac − b⁹d − bd⁹, ad + bc + b³d³)",
        Family::GanleySymplectic => "(a,b)∘(c,d) = (ac + bd, ad + b d^(1/3) − b^(1/9) c^(1/9) − b⁹c)",
        Family::PenttilaWilliams => "(a,b)∘(c,d) = (ac + bd, ad + bd⁹ + bc²⁷)",
        Family::PenttilaWilliamsCommutative => "(a,b)∘(c,d) = (ac + (bd)⁹, ad + bc + (bd)²⁷)",
        Family::Derived => "",
    }
}

fn constraints(f: Family) -> &'static str {
    match f {
        Family::Field => "any q = p^r <= 3^10",
        Family::Albert | Family::AlbertSymplectic | Family::Bkla => {
            "odd q; --k with ρ nontrivial and GF(q) of odd degree over the fixed field of ρ; default k = 1"
        }
        Family::Dickson | Family::Knuth => "odd q, r >= 2; --k with σ nontrivial, default k = 1; --nonsquare j",
        Family::CohenGanley | Family::ThasPayne => "q = 3^r >= 9; --nonsquare j",
        Family::Ganley | Family::GanleySymplectic => "q = 3^t, t >= 3 odd",
        Family::PenttilaWilliams | Family::PenttilaWilliamsCommutative => "q = 3^5; --reading selects the exponent grouping",
        Family::Derived => "",
    }
}

fn native_q(f: Family) -> Vec<u32> {
    match f {
        Family::Field => vec![2, 3, 4, 5, 7, 8, 9, 16, 27],
        Family::Albert | Family::AlbertSymplectic | Family::Bkla => vec![27],
        Family::Dickson | Family::Knuth | Family::CohenGanley | Family::ThasPayne => vec![9],
        Family::Ganley | Family::GanleySymplectic => vec![27],
        Family::PenttilaWilliams | Family::PenttilaWilliamsCommutative => vec![243],
        Family::Derived => vec![],
    }
}

/// Path used by `build mub` for a cataloged presemifield family.
pub fn default_path(f: Family) -> &'static str {
    match f {
        Family::Albert => "commutative",
        _ => "symplectic",
    }
}

pub fn catalog() -> Catalog {
    let mut entries: Vec<Entry> = Family::CATALOG
        .iter()
        .map(|&f| {
            let (commutative, symplectic) = f.declared();
            Entry {
                name: f.name().into(),
                object: "presemifield".into(),
                space: if f.is_pair() { "F+F" } else { "F" }.into(),
                commutative,
                symplectic,
                partner: f.partner().filter(|&p| p != f).map(|p| p.name().into()),
                formula: formula(f).into(),
                constraints: constraints(f).into(),
                native_q: native_q(f),
                default_path: default_path(f).into(),
            }
        })
        .collect();
    let extra = |name: &str, object: &str, space: &str, sym: bool, formula: &str, constraints: &str, q: Vec<u32>, path: &str| Entry {
        name: name.into(),
        object: object.into(),
        space: space.into(),
        commutative: false,
        symplectic: sym,
        partner: None,
        formula: formula.into(),
        constraints: constraints.into(),
        native_q: q,
        default_path: path.into(),
    };
    entries.push(extra(
        "suzuki",
        "spread",
        "F+F",
        true,
        "members {(u, u·M_c)}, c ∈ GF(q)², from the Suzuki-Tits ovoid",
        "q = 2^(2e+1)",
        vec![8],
        "symplectic",
    ));
    entries.push(extra(
        "bblp",
        "spread",
        "F",
        true,
        "σ_s and τ images of two Albert-type members, non-semifield",
        "odd q; --k as for albert, default k = 1",
        vec![27],
        "symplectic",
    ));
    entries.push(extra(
        "coulter-matthews",
        "planar-function",
        "F",
        false,
        "f(x) = x^((3^k + 1)/2)",
        "q = 3^r; --k with gcd(k, 2r) = 1 and k ≢ ±1 mod 2r; default is the smallest such k",
        vec![243],
        "planar",
    ));
    entries.push(extra(
        "pseudo-planar",
        "pseudo-planar-function",
        "F",
        false,
        "f(x) = Σ c·x^(2^i + 2^j), one --monomial c,i,j per term",
        "q = 2^r; f must be pseudo-planar",
        vec![8, 16],
        "pseudo-planar",
    ));
    Catalog { entries }
}

pub fn render_text(c: &Catalog) -> String {
    let mut out = String::new();
    for e in &c.entries {
        let mut flags = Vec::new();
        if e.commutative {
            flags.push("commutative");
        }
        if e.symplectic {
            flags.push("symplectic");
        }
        out.push_str(&format!("{} [{} on {}; {}]\n", e.name, e.object, e.space, flags.join(", ")));
        out.push_str(&format!("    {}\n", e.formula));
        out.push_str(&format!("    constraints: {}\n", e.constraints));
        let qs: Vec<String> = e.native_q.iter().map(u32::to_string).collect();
        out.push_str(&format!("    native q: {}; default path: {}", qs.join(", "), e.default_path));
        if let Some(p) = &e.partner {
            out.push_str(&format!("; partner: {p}"));
        }
        out.push('\n');
    }
    out
}
