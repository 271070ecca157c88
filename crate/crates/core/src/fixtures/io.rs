//! Instance files. See `docs/format.md` for the schema.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::algebra::Elem;
use crate::freecat::{Edge, Graph};
use crate::trackcat::{Comp, TrackCategory};

use super::{
    fixture_quadratic, hom_complex, DgTable, FixtureError, ProductKind, QuadraticGamma,
    QuadraticModel, TwistDatum, TwistGamma, TwistTerm,
};

pub const FORMAT: &str = "trackalg/instance";
pub const VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceFile {
    pub format: String,
    pub version: u32,
    pub name: String,
    pub kind: InstanceKind,
    pub modulus: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_rank: Option<usize>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub objects: Vec<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub units: Vec<usize>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub homs: Vec<HomSpec>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub products: Vec<ProductSpec>,
    pub linearity: LinearitySpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub graph: Option<Vec<EdgeSpec>>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum InstanceKind {
    DgTable,
    Quadratic,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HomSpec {
    pub source: usize,
    pub target: usize,
    pub c1: usize,
    pub c0: usize,
    /// Row `i` is the boundary coordinate `i` of each degree-1 generator.
    pub d: Vec<Vec<i64>>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub labels0: Vec<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub labels1: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProductSpec {
    pub kind: ProductKind,
    pub objects: [usize; 3],
    pub left: usize,
    pub right: usize,
    pub value: Elem,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "rule", rename_all = "snake_case", deny_unknown_fields)]
pub enum LinearitySpec {
    Identity,
    Twist { terms: Vec<TwistTermSpec> },
    Quadratic,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TwistTermSpec {
    pub objects: [usize; 3],
    pub epsilon: Vec<i64>,
    pub kappa: Vec<i64>,
    pub track: Elem,
}

/// A generating edge of the free category together with its image.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EdgeSpec {
    pub name: String,
    pub source: usize,
    pub target: usize,
    pub lift: Elem,
}

/// Generator names of one hom complex.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct HomLabels {
    pub deg0: Vec<String>,
    pub deg1: Vec<String>,
}

#[derive(Clone, Debug)]
pub enum Instance {
    Table {
        table: DgTable,
        gamma: TableLinearity,
        labels: Vec<Vec<HomLabels>>,
        graph: Option<Vec<EdgeSpec>>,
    },
    Quadratic {
        model: QuadraticModel,
        gamma: QuadraticGamma,
        graph: Option<Vec<EdgeSpec>>,
    },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TableLinearity {
    Identity,
    Twist(TwistGamma),
}

impl Instance {
    pub fn category(&self) -> &dyn TrackCategory {
        match self {
            Instance::Table { table, .. } => table,
            Instance::Quadratic { model, .. } => model,
        }
    }

    pub fn linearity(&self) -> &dyn crate::linearity::LinearitySystem {
        match self {
            Instance::Table {
                gamma: TableLinearity::Identity,
                ..
            } => &crate::linearity::IdentityGamma,
            Instance::Table {
                gamma: TableLinearity::Twist(g),
                ..
            } => g,
            Instance::Quadratic { gamma, .. } => gamma,
        }
    }

    pub fn graph(&self) -> Option<&[EdgeSpec]> {
        match self {
            Instance::Table { graph, .. } | Instance::Quadratic { graph, .. } => graph.as_deref(),
        }
    }

    /// The declared generating graph and edge lifts.
    pub fn generating_graph(&self) -> Result<(Graph, Vec<Elem>), FixtureError> {
        let edges = self
            .graph()
            .ok_or_else(|| FixtureError::Shape("instance declares no generating graph".into()))?;
        let graph = Graph::new(
            self.category().num_objects(),
            edges
                .iter()
                .map(|e| Edge {
                    name: e.name.clone(),
                    source: e.source,
                    target: e.target,
                })
                .collect(),
        )
        .map_err(|e| FixtureError::Shape(e.to_string()))?;
        Ok((graph, edges.iter().map(|e| e.lift.clone()).collect()))
    }

    /// Generator labels of `Hom(a, b)`, falling back to `g0, g1, …` and `h0, …`.
    pub fn labels(&self, a: usize, b: usize) -> HomLabels {
        let hom = self.category().hom(a, b);
        let given = match self {
            Instance::Table { labels, .. } => labels[a][b].clone(),
            Instance::Quadratic { .. } => HomLabels::default(),
        };
        let fill = |v: Vec<String>, n: usize, p: &str| {
            if v.len() == n {
                v
            } else {
                (0..n).map(|i| format!("{p}{i}")).collect()
            }
        };
        HomLabels {
            deg0: fill(given.deg0, hom.c0().rank(), "g"),
            deg1: fill(given.deg1, hom.c1().rank(), "h"),
        }
    }
}

fn shape(msg: impl Into<String>) -> FixtureError {
    FixtureError::Shape(msg.into())
}

/// Builds an instance from a parsed file. Only structural checks are made;
/// law checks are the caller's business.
pub fn from_file(f: &InstanceFile) -> Result<Instance, FixtureError> {
    if f.format != FORMAT {
        return Err(FixtureError::Parse(format!("unknown format {:?}", f.format)));
    }
    if f.version != VERSION {
        return Err(FixtureError::Parse(format!("unsupported version {}", f.version)));
    }
    match f.kind {
        InstanceKind::Quadratic => {
            if !f.homs.is_empty() || !f.products.is_empty() || !f.objects.is_empty() {
                return Err(shape("quadratic instances take no homs, products or objects"));
            }
            if f.linearity != LinearitySpec::Quadratic {
                return Err(shape("quadratic instances use the quadratic rule"));
            }
            let max_rank = f.max_rank.ok_or_else(|| shape("missing max_rank"))?;
            let (model, gamma) = fixture_quadratic(f.modulus, max_rank)?;
            Ok(Instance::Quadratic {
                model,
                gamma,
                graph: f.graph.clone(),
            })
        }
        InstanceKind::DgTable => {
            if f.max_rank.is_some() {
                return Err(shape("max_rank applies to quadratic instances only"));
            }
            let n = f.objects.len();
            let mut homs = vec![vec![None; n]; n];
            let mut labels = vec![vec![HomLabels::default(); n]; n];
            for h in &f.homs {
                if h.source >= n || h.target >= n {
                    return Err(shape(format!("hom {}→{} on missing object", h.source, h.target)));
                }
                if homs[h.source][h.target].is_some() {
                    return Err(shape(format!("hom {}→{} given twice", h.source, h.target)));
                }
                if h.d.len() != h.c0 || h.d.iter().any(|r| r.len() != h.c1) {
                    return Err(shape(format!("d of hom {}→{} is not {}×{}", h.source, h.target, h.c0, h.c1)));
                }
                for (ls, k, what) in [(&h.labels0, h.c0, "labels0"), (&h.labels1, h.c1, "labels1")] {
                    if !ls.is_empty() && ls.len() != k {
                        return Err(shape(format!("{what} of hom {}→{} has {} entries", h.source, h.target, ls.len())));
                    }
                }
                homs[h.source][h.target] = Some(hom_complex(f.modulus, h.c1, h.c0, h.d.clone())?);
                labels[h.source][h.target] = HomLabels {
                    deg0: h.labels0.clone(),
                    deg1: h.labels1.clone(),
                };
            }
            let homs = homs
                .into_iter()
                .enumerate()
                .map(|(a, row)| {
                    row.into_iter()
                        .enumerate()
                        .map(|(b, h)| h.ok_or_else(|| shape(format!("hom {a}→{b} missing"))))
                        .collect::<Result<Vec<_>, _>>()
                })
                .collect::<Result<Vec<_>, _>>()?;
            let mut table = DgTable::new(f.name.clone(), f.objects.clone(), homs, f.units.clone())?;
            for p in &f.products {
                let [a, b, c] = p.objects;
                if a >= n || b >= n || c >= n {
                    return Err(shape(format!("product on missing objects {:?}", p.objects)));
                }
                table.set(p.kind, Comp::new(a, b, c), p.left, p.right, p.value.clone())?;
            }
            let gamma = match &f.linearity {
                LinearitySpec::Identity => TableLinearity::Identity,
                LinearitySpec::Twist { terms } => {
                    let mut datum = TwistDatum::default();
                    for t in terms {
                        let [a, b, c] = t.objects;
                        if a >= n || b >= n || c >= n {
                            return Err(shape(format!("twist term on missing objects {:?}", t.objects)));
                        }
                        let comp = Comp::new(a, b, c);
                        if t.epsilon.len() != table.hom(b, c).c0().rank()
                            || t.kappa.len() != table.hom(a, b).c0().rank()
                            || !table.hom(a, c).c1().contains(&t.track)
                        {
                            return Err(shape(format!("twist term at {:?} has wrong sizes", t.objects)));
                        }
                        datum.terms.push(TwistTerm {
                            comp,
                            epsilon: t.epsilon.clone(),
                            kappa: t.kappa.clone(),
                            track: t.track.clone(),
                        });
                    }
                    TableLinearity::Twist(TwistGamma { datum })
                }
                LinearitySpec::Quadratic => {
                    return Err(shape("the quadratic rule needs a quadratic instance"));
                }
            };
            Ok(Instance::Table {
                table,
                gamma,
                labels,
                graph: f.graph.clone(),
            })
        }
    }
}

/// The canonical file of an instance: homs in row-major order, products
/// in the order of [`DgTable::entries`] minus those forced by units.
pub fn to_file(inst: &Instance) -> InstanceFile {
    match inst {
        Instance::Quadratic { model, graph, .. } => InstanceFile {
            format: FORMAT.into(),
            version: VERSION,
            name: model.name(),
            kind: InstanceKind::Quadratic,
            modulus: model.modulus(),
            max_rank: Some(model.max_rank()),
            objects: vec![],
            units: vec![],
            homs: vec![],
            products: vec![],
            linearity: LinearitySpec::Quadratic,
            graph: graph.clone(),
        },
        Instance::Table {
            table,
            gamma,
            labels,
            graph,
        } => {
            let n = table.num_objects();
            let modulus = (0..n)
                .flat_map(|a| (0..n).map(move |b| (a, b)))
                .find_map(|(a, b)| {
                    let h = table.hom(a, b);
                    h.c0().orders().first().or(h.c1().orders().first()).copied()
                })
                .unwrap_or(2);
            let mut homs = vec![];
            for a in 0..n {
                for b in 0..n {
                    let h = table.hom(a, b);
                    homs.push(HomSpec {
                        source: a,
                        target: b,
                        c1: h.c1().rank(),
                        c0: h.c0().rank(),
                        d: h.d().matrix().to_vec(),
                        labels0: labels[a][b].deg0.clone(),
                        labels1: labels[a][b].deg1.clone(),
                    });
                }
            }
            let bare = DgTable::new(
                table.name.clone(),
                table.objects.clone(),
                table.homs().clone(),
                (0..n).map(|a| table.unit_generator(a)).collect(),
            )
            .expect("table already valid");
            let products = table
                .entries()
                .into_iter()
                .filter(|(kind, c, i, j, v)| bare.table(*kind, *c)[*i][*j] != *v)
                .map(|(kind, c, i, j, v)| ProductSpec {
                    kind,
                    objects: [c.a, c.b, c.c],
                    left: i,
                    right: j,
                    value: v,
                })
                .collect();
            let linearity = match gamma {
                TableLinearity::Identity => LinearitySpec::Identity,
                TableLinearity::Twist(g) => LinearitySpec::Twist {
                    terms: g
                        .datum
                        .terms
                        .iter()
                        .map(|t| TwistTermSpec {
                            objects: [t.comp.a, t.comp.b, t.comp.c],
                            epsilon: t.epsilon.clone(),
                            kappa: t.kappa.clone(),
                            track: t.track.clone(),
                        })
                        .collect(),
                },
            };
            InstanceFile {
                format: FORMAT.into(),
                version: VERSION,
                name: table.name.clone(),
                kind: InstanceKind::DgTable,
                modulus,
                max_rank: None,
                objects: table.objects.clone(),
                units: (0..n).map(|a| table.unit_generator(a)).collect(),
                homs,
                products,
                linearity,
                graph: graph.clone(),
            }
        }
    }
}

/// Canonical JSON text: pretty-printed, trailing newline.
pub fn to_json(inst: &Instance) -> String {
    let mut s = serde_json::to_string_pretty(&to_file(inst)).expect("serializable");
    s.push('\n');
    s
}

pub fn from_json(text: &str) -> Result<Instance, FixtureError> {
    let f: InstanceFile =
        serde_json::from_str(text).map_err(|e| FixtureError::Parse(e.to_string()))?;
    from_file(&f)
}

pub fn load(path: &Path) -> Result<Instance, FixtureError> {
    let text = std::fs::read_to_string(path).map_err(|e| FixtureError::Io {
        path: path.display().to_string(),
        detail: e.to_string(),
    })?;
    from_json(&text)
}

pub fn save(inst: &Instance, path: &Path) -> Result<(), FixtureError> {
    std::fs::write(path, to_json(inst)).map_err(|e| FixtureError::Io {
        path: path.display().to_string(),
        detail: e.to_string(),
    })
}

fn named_labels(n: usize, given: &[((usize, usize), (&[&str], &[&str]))]) -> Vec<Vec<HomLabels>> {
    let mut labels = vec![vec![HomLabels::default(); n]; n];
    for ((a, b), (l0, l1)) in given {
        labels[*a][*b] = HomLabels {
            deg0: l0.iter().map(|s| s.to_string()).collect(),
            deg1: l1.iter().map(|s| s.to_string()).collect(),
        };
    }
    labels
}

fn edge(name: &str, source: usize, target: usize, lift: Elem) -> EdgeSpec {
    EdgeSpec {
        name: name.into(),
        source,
        target,
        lift,
    }
}

/// One edge `(E_ij, 0)` per matrix unit between every pair of ranks.
pub fn elementary_edges(model: &QuadraticModel) -> Vec<EdgeSpec> {
    let n = model.max_rank();
    let mut out = vec![];
    for src in 0..n {
        for tgt in 0..n {
            for i in 0..model.rank(tgt) {
                for j in 0..model.rank(src) {
                    let name = format!("E{}{}:{}>{}", i + 1, j + 1, model.rank(src), model.rank(tgt));
                    out.push(edge(&name, src, tgt, model.elementary(src, tgt, i, j)));
                }
            }
        }
    }
    out
}

/// The shipped instances by name: `Tc`, `M2`, `Pair`, `Q2`.
pub fn shipped(name: &str) -> Option<Instance> {
    match name {
        "Tc" => {
            let (table, g) = super::tc();
            Some(Instance::Table {
                table,
                gamma: TableLinearity::Twist(g),
                labels: named_labels(1, &[((0, 0), (&["1", "x"], &["t"]))]),
                graph: Some(vec![EdgeSpec {
                    name: "x".into(),
                    source: 0,
                    target: 0,
                    lift: vec![0, 1],
                }]),
            })
        }
        "M2" => Some(Instance::Table {
            table: super::m2(),
            gamma: TableLinearity::Identity,
            labels: named_labels(1, &[((0, 0), (&["1", "x", "u"], &["a", "t"]))]),
            graph: Some(vec![edge("x", 0, 0, vec![0, 1, 0])]),
        }),
        "Pair" => Some(Instance::Table {
            table: super::bilinear_pair(),
            gamma: TableLinearity::Identity,
            labels: named_labels(
                2,
                &[
                    ((0, 0), (&["1", "e"], &[])),
                    ((1, 1), (&["1"], &[])),
                    ((0, 1), (&["f", "g"], &["t"])),
                ],
            ),
            graph: Some(vec![edge("e", 0, 0, vec![0, 1]), edge("f", 0, 1, vec![1, 0])]),
        }),
        "Q2" => {
            let (model, gamma) = fixture_quadratic(2, 2).expect("valid parameters");
            let graph = Some(elementary_edges(&model));
            Some(Instance::Quadratic { model, gamma, graph })
        }
        _ => None,
    }
}

pub const SHIPPED: [&str; 4] = ["Tc", "M2", "Pair", "Q2"];

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shipped_round_trip() {
        for name in SHIPPED {
            let inst = shipped(name).unwrap();
            let text = to_json(&inst);
            let back = from_json(&text).unwrap();
            assert_eq!(to_json(&back), text, "{name}");
        }
    }

    #[test]
    fn rejects_unknown_fields_and_bad_shapes() {
        let mut f = to_file(&shipped("Tc").unwrap());
        f.homs[0].d = vec![vec![0]];
        assert!(matches!(from_file(&f), Err(FixtureError::Shape(_))));
        let text = to_json(&shipped("M2").unwrap()).replacen("\"name\"", "\"extra\": 1,\n  \"name\"", 1);
        assert!(matches!(from_json(&text), Err(FixtureError::Parse(_))));
    }
}
