//! JSON documents for spaces, maps, covering systems and atlases, plus
//! ingestion from point clouds and edge lists.
//!
//! Every document carries a `format` tag and a `version`. Printed documents
//! are canonical: points sorted by identifier, every subset sorted, object
//! keys sorted, two-space indentation and a trailing newline.

use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

use crate::covering::{Chart, CoveringAtlas};
use crate::error::{Error, Result};
use crate::pointset::PointSet;
use crate::space::{Carrier, LimitSpace, PointMap, RawConvergenceTable};

pub const VERSION: u32 = 1;
pub const SPACE_FORMAT: &str = "limit-space";
pub const MAP_FORMAT: &str = "limit-map";
pub const COVER_FORMAT: &str = "cover";
pub const ATLAS_FORMAT: &str = "covering-atlas";

fn parse_err(e: impl std::fmt::Display) -> Error {
    Error::Parse(e.to_string())
}

fn check_header(format: &str, version: u32, want: &str) -> Result<()> {
    if format != want {
        return Err(Error::Parse(format!("expected format `{want}`, found `{format}`")));
    }
    if version != VERSION {
        return Err(Error::Parse(format!("unsupported {want} version {version}")));
    }
    Ok(())
}

/// Pretty JSON with a trailing newline.
pub fn to_canonical_json<T: Serialize>(doc: &T) -> String {
    let mut s = serde_json::to_string_pretty(doc).expect("documents serialize");
    s.push('\n');
    s
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpaceDocument {
    pub format: String,
    pub version: u32,
    pub points: Vec<String>,
    /// Closed form: one set per point.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub vmax: Option<BTreeMap<String, Vec<String>>>,
    /// Raw form: listed convergent generators per point.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub convergence: Option<BTreeMap<String, Vec<Vec<String>>>>,
    #[serde(default, skip_serializing_if = "Map::is_empty")]
    pub metadata: Map<String, Value>,
}

/// A space document after resolving identifiers.
#[derive(Clone, Debug)]
pub enum Decoded {
    Closed(LimitSpace),
    Raw(RawConvergenceTable),
}

fn sorted_names(carrier: &Carrier, set: &PointSet) -> Vec<String> {
    let mut v = carrier.names_of(set);
    v.sort();
    v
}

impl SpaceDocument {
    pub fn from_space(space: &LimitSpace) -> Self {
        let c = space.carrier();
        let mut points = c.names().to_vec();
        points.sort();
        let vmax = (0..space.len())
            .map(|x| (c.name(x).to_string(), sorted_names(c, space.vmax(x))))
            .collect();
        SpaceDocument {
            format: SPACE_FORMAT.into(),
            version: VERSION,
            points,
            vmax: Some(vmax),
            convergence: None,
            metadata: Map::new(),
        }
    }

    pub fn from_raw(raw: &RawConvergenceTable) -> Self {
        let c = raw.carrier();
        let mut points = c.names().to_vec();
        points.sort();
        let convergence = (0..c.len())
            .map(|x| {
                let mut fam: Vec<Vec<String>> = raw.generators(x).iter().map(|s| sorted_names(c, s)).collect();
                fam.sort();
                fam.dedup();
                (c.name(x).to_string(), fam)
            })
            .collect();
        SpaceDocument {
            format: SPACE_FORMAT.into(),
            version: VERSION,
            points,
            vmax: None,
            convergence: Some(convergence),
            metadata: Map::new(),
        }
    }

    pub fn with_metadata(mut self, key: &str, value: Value) -> Self {
        self.metadata.insert(key.to_string(), value);
        self
    }

    pub fn parse(text: &str) -> Result<Self> {
        let doc: SpaceDocument = serde_json::from_str(text).map_err(parse_err)?;
        check_header(&doc.format, doc.version, SPACE_FORMAT)?;
        Ok(doc)
    }

    pub fn to_json(&self) -> String {
        to_canonical_json(self)
    }

    fn carrier(&self) -> Result<Arc<Carrier>> {
        Ok(Arc::new(Carrier::new(self.points.iter().cloned())?))
    }

    fn check_keys<T>(carrier: &Carrier, table: &BTreeMap<String, T>) -> Result<()> {
        for k in table.keys() {
            carrier.index_of(k)?;
        }
        Ok(())
    }

    pub fn decode(&self) -> Result<Decoded> {
        let carrier = self.carrier()?;
        match (&self.vmax, &self.convergence) {
            (Some(_), Some(_)) => Err(Error::Parse("give either `vmax` or `convergence`, not both".into())),
            (None, None) => Err(Error::Parse("missing `vmax` or `convergence`".into())),
            (Some(table), None) => {
                Self::check_keys(&carrier, table)?;
                let vmax = (0..carrier.len())
                    .map(|x| match table.get(carrier.name(x)) {
                        Some(names) => carrier.subset(names),
                        None => Ok(PointSet::singleton(x)),
                    })
                    .collect::<Result<Vec<_>>>()?;
                Ok(Decoded::Closed(LimitSpace::from_vmax(carrier, vmax)?))
            }
            (None, Some(table)) => {
                Self::check_keys(&carrier, table)?;
                let gens = (0..carrier.len())
                    .map(|x| {
                        table
                            .get(carrier.name(x))
                            .map(|fam| fam.iter().map(|s| carrier.subset(s)).collect())
                            .unwrap_or_else(|| Ok(Vec::new()))
                    })
                    .collect::<Result<Vec<_>>>()?;
                Ok(Decoded::Raw(RawConvergenceTable::new(carrier, gens)?))
            }
        }
    }

    /// The closed space, closing a raw table when necessary.
    pub fn space(&self) -> Result<LimitSpace> {
        Ok(match self.decode()? {
            Decoded::Closed(s) => s,
            Decoded::Raw(r) => r.close(),
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MapDocument {
    pub format: String,
    pub version: u32,
    pub domain: SpaceDocument,
    pub codomain: SpaceDocument,
    pub table: BTreeMap<String, String>,
    #[serde(default, skip_serializing_if = "Map::is_empty")]
    pub metadata: Map<String, Value>,
}

impl MapDocument {
    pub fn from_map(m: &PointMap) -> Self {
        let (d, c) = (m.domain(), m.codomain());
        MapDocument {
            format: MAP_FORMAT.into(),
            version: VERSION,
            domain: SpaceDocument::from_space(d),
            codomain: SpaceDocument::from_space(c),
            table: (0..d.len())
                .map(|x| (d.name(x).to_string(), c.name(m.apply(x)).to_string()))
                .collect(),
            metadata: Map::new(),
        }
    }

    pub fn parse(text: &str) -> Result<Self> {
        let doc: MapDocument = serde_json::from_str(text).map_err(parse_err)?;
        check_header(&doc.format, doc.version, MAP_FORMAT)?;
        Ok(doc)
    }

    pub fn to_json(&self) -> String {
        to_canonical_json(self)
    }

    pub fn decode(&self) -> Result<PointMap> {
        let d = self.domain.space()?;
        let c = self.codomain.space()?;
        SpaceDocument::check_keys(d.carrier(), &self.table)?;
        let table = (0..d.len())
            .map(|x| {
                let name = d.name(x);
                let y = self
                    .table
                    .get(name)
                    .ok_or_else(|| Error::Parse(format!("no image for `{name}`")))?;
                c.index_of(y)
            })
            .collect::<Result<Vec<_>>>()?;
        PointMap::new(d, c, table)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CoverDocument {
    pub format: String,
    pub version: u32,
    pub sets: Vec<Vec<String>>,
}

impl CoverDocument {
    pub fn from_sets(space: &LimitSpace, sets: &[PointSet]) -> Self {
        CoverDocument {
            format: COVER_FORMAT.into(),
            version: VERSION,
            sets: sets.iter().map(|s| sorted_names(space.carrier(), s)).collect(),
        }
    }

    pub fn parse(text: &str) -> Result<Self> {
        let doc: CoverDocument = serde_json::from_str(text).map_err(parse_err)?;
        check_header(&doc.format, doc.version, COVER_FORMAT)?;
        Ok(doc)
    }

    pub fn to_json(&self) -> String {
        to_canonical_json(self)
    }

    pub fn decode(&self, space: &LimitSpace) -> Result<Vec<PointSet>> {
        self.sets.iter().map(|s| space.carrier().subset(s)).collect()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChartDocument {
    pub set: Vec<String>,
    /// `e ↦ (p(e), sheet)`.
    pub table: BTreeMap<String, (String, usize)>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AtlasDocument {
    pub format: String,
    pub version: u32,
    pub map: MapDocument,
    pub fiber: usize,
    /// Structure on the sheets when it is not discrete; sheet `s` is the
    /// `s`-th listed point.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fiber_space: Option<SpaceDocument>,
    pub charts: Vec<ChartDocument>,
}

impl AtlasDocument {
    pub fn from_atlas(a: &CoveringAtlas) -> Self {
        let (e, b) = (a.total(), a.base());
        let fs = a.fiber_space();
        let discrete = (0..fs.len()).all(|i| fs.vmax(i).len() == 1);
        let fiber_space = (!discrete).then(|| SpaceDocument::from_space(fs));
        // Sheets are renumbered to follow the sorted point list of the document.
        let sheet_of: Vec<usize> = match &fiber_space {
            Some(doc) => (0..fs.len())
                .map(|i| doc.points.iter().position(|p| p == fs.name(i)).expect("listed"))
                .collect(),
            None => (0..fs.len()).collect(),
        };
        let charts = a
            .charts()
            .iter()
            .map(|c| ChartDocument {
                set: sorted_names(b.carrier(), c.set()),
                table: c
                    .table()
                    .iter()
                    .map(|(&x, &(y, s))| (e.name(x).to_string(), (b.name(y).to_string(), sheet_of[s])))
                    .collect(),
            })
            .collect();
        AtlasDocument {
            format: ATLAS_FORMAT.into(),
            version: VERSION,
            map: MapDocument::from_map(a.map()),
            fiber: a.fiber_size(),
            fiber_space,
            charts,
        }
    }

    pub fn parse(text: &str) -> Result<Self> {
        let doc: AtlasDocument = serde_json::from_str(text).map_err(parse_err)?;
        check_header(&doc.format, doc.version, ATLAS_FORMAT)?;
        Ok(doc)
    }

    pub fn to_json(&self) -> String {
        to_canonical_json(self)
    }

    pub fn decode(&self) -> Result<CoveringAtlas> {
        let map = self.map.decode()?;
        let (e, b) = (map.domain(), map.codomain());
        let charts = self
            .charts
            .iter()
            .map(|c| {
                let set = b.carrier().subset(&c.set)?;
                let table = c
                    .table
                    .iter()
                    .map(|(x, (y, s))| Ok((e.index_of(x)?, (b.index_of(y)?, *s))))
                    .collect::<Result<BTreeMap<_, _>>>()?;
                Ok(Chart::new(set, table))
            })
            .collect::<Result<Vec<_>>>()?;
        match &self.fiber_space {
            None => CoveringAtlas::new(map, self.fiber, charts),
            Some(doc) => {
                let fs = doc.space()?;
                if fs.len() != self.fiber {
                    return Err(Error::Parse("`fiber` disagrees with `fiber_space`".into()));
                }
                CoveringAtlas::with_fiber_space(map, fs, charts)
            }
        }
    }
}

/// Fractional digits kept exactly when parsing decimals.
const EXACT_DIGITS: usize = 12;

/// `s · 10¹²` when `s` is a plain decimal with at most twelve fractional
/// digits.
fn exact_decimal(s: &str) -> Option<BigInt> {
    let t = s.trim();
    let (neg, body) = match t.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, t.strip_prefix('+').unwrap_or(t)),
    };
    let (int, frac) = body.split_once('.').unwrap_or((body, ""));
    if (int.is_empty() && frac.is_empty())
        || frac.len() > EXACT_DIGITS
        || !int.bytes().chain(frac.bytes()).all(|b| b.is_ascii_digit())
    {
        return None;
    }
    let digits = format!("{int}{frac:0<width$}", width = EXACT_DIGITS);
    let v: BigInt = digits.parse().ok()?;
    Some(if neg { -v } else { v })
}

fn float(s: &str) -> Result<f64> {
    let v: f64 = s
        .trim()
        .parse()
        .map_err(|_| Error::Parse(format!("malformed number `{s}`")))?;
    if !v.is_finite() {
        return Err(Error::Parse(format!("coordinate `{s}` is not finite")));
    }
    Ok(v)
}

/// Points with decimal coordinates, kept as text until the scale is known.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScaledCloud {
    pub points: Vec<(String, Vec<String>)>,
    pub scale: String,
}

impl ScaledCloud {
    /// Reads `identifier,coordinate,…` rows; blank lines and lines starting
    /// with `#` are skipped.
    pub fn from_csv(text: &str, scale: &str) -> Result<Self> {
        let mut rdr = csv::ReaderBuilder::new()
            .has_headers(false)
            .comment(Some(b'#'))
            .flexible(true)
            .trim(csv::Trim::All)
            .from_reader(text.as_bytes());
        let mut points = Vec::new();
        for rec in rdr.records() {
            let rec = rec.map_err(parse_err)?;
            let mut fields = rec.iter();
            let Some(id) = fields.next().filter(|f| !f.is_empty()) else {
                continue;
            };
            points.push((id.to_string(), fields.map(str::to_string).collect()));
        }
        Ok(ScaledCloud {
            points,
            scale: scale.to_string(),
        })
    }
}

/// `V(x) = {y : d(x, y) ≤ r}` in the euclidean metric. Squared distances are
/// compared exactly when every number has at most twelve fractional digits;
/// otherwise in binary floating point, still with inclusive `≤`.
pub fn from_cloud(cloud: &ScaledCloud) -> Result<LimitSpace> {
    let carrier = Arc::new(Carrier::new(cloud.points.iter().map(|(id, _)| id.clone()))?);
    let dim = cloud.points.first().map_or(0, |p| p.1.len());
    if let Some((id, _)) = cloud.points.iter().find(|p| p.1.len() != dim) {
        return Err(Error::Parse(format!("`{id}` has a different number of coordinates")));
    }
    for (_, xs) in &cloud.points {
        for x in xs {
            float(x)?;
        }
    }
    if float(&cloud.scale)? < 0.0 {
        return Err(Error::Parse("scale must be nonnegative".into()));
    }
    let n = cloud.points.len();
    let exact: Option<(Vec<Vec<BigInt>>, BigInt)> = (|| {
        let pts = cloud
            .points
            .iter()
            .map(|(_, xs)| xs.iter().map(|x| exact_decimal(x)).collect::<Option<Vec<_>>>())
            .collect::<Option<Vec<_>>>()?;
        Some((pts, exact_decimal(&cloud.scale)?))
    })();
    let within: Box<dyn Fn(usize, usize) -> bool> = match exact {
        Some((pts, r)) => {
            if r.is_negative() {
                return Err(Error::Parse("scale must be nonnegative".into()));
            }
            let r2 = &r * &r;
            Box::new(move |i, j| {
                let d2 = pts[i].iter().zip(&pts[j]).fold(BigInt::zero(), |acc, (a, b)| {
                    let d = a - b;
                    acc + &d * &d
                });
                d2 <= r2
            })
        }
        None => {
            let pts: Vec<Vec<f64>> = cloud
                .points
                .iter()
                .map(|(_, xs)| xs.iter().map(|x| float(x).expect("checked")).collect())
                .collect();
            let r = float(&cloud.scale)?;
            Box::new(move |i, j| {
                let d2: f64 = pts[i].iter().zip(&pts[j]).map(|(a, b)| (a - b) * (a - b)).sum();
                d2 <= r * r
            })
        }
    };
    let vmax = (0..n).map(|i| (0..n).filter(|&j| within(i, j)).collect()).collect();
    LimitSpace::from_vmax(carrier, vmax)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EdgeMode {
    /// `a → b` means `[{a}] → b`, so `a ∈ V(b)`.
    Directed,
    Symmetric,
}

/// An edge-list file: one `a b` or `a,b` pair per line, a lone identifier
/// declares an isolated point, `#` starts a comment.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct EdgeList {
    pub points: Vec<String>,
    pub edges: Vec<(String, String)>,
}

impl EdgeList {
    pub fn parse(text: &str) -> Result<Self> {
        let mut list = EdgeList::default();
        let mut seen = HashMap::new();
        let mut note = |p: &str, list: &mut EdgeList| {
            if !seen.contains_key(p) {
                seen.insert(p.to_string(), ());
                list.points.push(p.to_string());
            }
        };
        for (lineno, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("");
            let fields: Vec<&str> = line
                .split(|c: char| c == ',' || c.is_whitespace())
                .filter(|f| !f.is_empty())
                .collect();
            match fields[..] {
                [] => {}
                [p] => note(p, &mut list),
                [a, b] => {
                    note(a, &mut list);
                    note(b, &mut list);
                    list.edges.push((a.to_string(), b.to_string()));
                }
                _ => {
                    return Err(Error::Parse(format!(
                        "line {}: expected one or two identifiers",
                        lineno + 1
                    )))
                }
            }
        }
        Ok(list)
    }
}

/// `V(x) = {x} ∪` in-neighbors (directed) or neighbors (symmetric).
pub fn from_edges(points: &[String], edges: &[(String, String)], mode: EdgeMode) -> Result<LimitSpace> {
    let carrier = Arc::new(Carrier::new(points.iter().cloned())?);
    let mut vmax: Vec<PointSet> = (0..carrier.len()).map(PointSet::singleton).collect();
    for (a, b) in edges {
        let (i, j) = (carrier.index_of(a)?, carrier.index_of(b)?);
        vmax[j].insert(i);
        if mode == EdgeMode::Symmetric {
            vmax[i].insert(j);
        }
    }
    LimitSpace::from_vmax(carrier, vmax)
}
