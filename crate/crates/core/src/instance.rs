//! Symmetric GTSP instances and the GTSPLIB text format.
//!
//! Vertex and cluster indices are 1-based wherever they cross the public
//! boundary (files, [`Instance::edge_cost`], [`Instance::cluster_of`]).
//! Everything suffixed `_idx` works on 0-based indices and is meant for the
//! search code, which calls it in tight loops.

use std::fmt::{self, Write as _};
use std::path::Path;
use std::str::FromStr;

use thiserror::Error;

/// Above this vertex count costs are evaluated on demand instead of being
/// tabulated at load time.
pub const DENSE_LIMIT: usize = 1000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WeightKind {
    Euc2d,
    Ceil2d,
    Att,
    Geo,
    Explicit,
}

impl WeightKind {
    pub fn keyword(self) -> &'static str {
        match self {
            WeightKind::Euc2d => "EUC_2D",
            WeightKind::Ceil2d => "CEIL_2D",
            WeightKind::Att => "ATT",
            WeightKind::Geo => "GEO",
            WeightKind::Explicit => "EXPLICIT",
        }
    }
}

impl FromStr for WeightKind {
    type Err = ();

    fn from_str(s: &str) -> Result<Self, ()> {
        Ok(match s {
            "EUC_2D" => WeightKind::Euc2d,
            "CEIL_2D" => WeightKind::Ceil2d,
            "ATT" => WeightKind::Att,
            "GEO" => WeightKind::Geo,
            "EXPLICIT" => WeightKind::Explicit,
            _ => return Err(()),
        })
    }
}

impl fmt::Display for WeightKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.keyword())
    }
}

/// Layout of an `EDGE_WEIGHT_SECTION`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MatrixFormat {
    FullMatrix,
    UpperRow,
    LowerDiagRow,
}

impl MatrixFormat {
    pub fn keyword(self) -> &'static str {
        match self {
            MatrixFormat::FullMatrix => "FULL_MATRIX",
            MatrixFormat::UpperRow => "UPPER_ROW",
            MatrixFormat::LowerDiagRow => "LOWER_DIAG_ROW",
        }
    }

    fn entries(self, n: usize) -> usize {
        match self {
            MatrixFormat::FullMatrix => n * n,
            MatrixFormat::UpperRow => n * (n - 1) / 2,
            MatrixFormat::LowerDiagRow => n * (n + 1) / 2,
        }
    }
}

impl FromStr for MatrixFormat {
    type Err = ();

    fn from_str(s: &str) -> Result<Self, ()> {
        Ok(match s {
            "FULL_MATRIX" => MatrixFormat::FullMatrix,
            "UPPER_ROW" => MatrixFormat::UpperRow,
            "LOWER_DIAG_ROW" => MatrixFormat::LowerDiagRow,
            _ => return Err(()),
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseErrorKind {
    #[error("malformed header line: {0}")]
    MalformedHeader(String),
    #[error("missing required field {0}")]
    MissingField(&'static str),
    #[error("unsupported TYPE {0} (expected GTSP)")]
    UnsupportedType(String),
    #[error("unsupported EDGE_WEIGHT_TYPE {0}")]
    UnsupportedWeightType(String),
    #[error("unsupported or missing EDGE_WEIGHT_FORMAT {0}")]
    UnsupportedWeightFormat(String),
    #[error("unexpected section {0}")]
    UnexpectedSection(String),
    #[error("invalid number {0:?}")]
    BadNumber(String),
    #[error("DIMENSION is {expected} but the section holds {found} entries")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("GTSP_SETS is {expected} but {found} sets were given")]
    SetCountMismatch { expected: usize, found: usize },
    #[error("vertex {0} is out of range")]
    VertexOutOfRange(i64),
    #[error("set id {0} is out of range or repeated")]
    BadSetId(i64),
    #[error("vertex {vertex} appears in set {first} and set {second}")]
    DuplicateVertex {
        vertex: usize,
        first: usize,
        second: usize,
    },
    #[error("set {0} is not terminated by -1")]
    MissingSetTerminator(usize),
    #[error("set {0} is empty")]
    EmptySet(usize),
    #[error("vertex {0} belongs to no set")]
    UncoveredVertex(usize),
    #[error("coordinates given twice for vertex {0}")]
    DuplicateCoordinate(usize),
    #[error("cost table is not symmetric at ({0}, {1})")]
    AsymmetricCosts(usize, usize),
    #[error("negative cost at ({0}, {1})")]
    NegativeCost(usize, usize),
}

/// A GTSPLIB parse failure, with the 1-based line it was detected on.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}: {kind}")]
pub struct ParseError {
    pub line: usize,
    pub kind: ParseErrorKind,
}

#[derive(Debug, Error)]
pub enum InstanceError {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("vertex {index} out of range 1..={n}")]
    VertexOutOfRange { index: usize, n: usize },
    #[error("invalid instance: {0}")]
    Invalid(String),
    #[error("reading {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

/// An immutable symmetric GTSP instance.
#[derive(Debug, Clone, PartialEq)]
pub struct Instance {
    name: String,
    comment: Option<String>,
    weight_kind: WeightKind,
    weight_format: Option<MatrixFormat>,
    coords: Option<Vec<(f64, f64)>>,
    /// Vertex members of each cluster, 0-based, in file order.
    clusters: Vec<Vec<usize>>,
    vertex_cluster: Vec<usize>,
    /// Row-major n×n table; always present for EXPLICIT, and for coordinate
    /// kinds up to [`DENSE_LIMIT`] vertices.
    table: Option<Vec<i64>>,
}

impl Instance {
    /// Builds a coordinate instance from 0-based cluster member lists.
    pub fn from_coords(
        name: impl Into<String>,
        kind: WeightKind,
        coords: Vec<(f64, f64)>,
        clusters: Vec<Vec<usize>>,
    ) -> Result<Self, InstanceError> {
        if kind == WeightKind::Explicit {
            return Err(InstanceError::Invalid(
                "EXPLICIT instances need a cost table".into(),
            ));
        }
        let vertex_cluster = partition_lookup(coords.len(), &clusters)?;
        let mut inst = Instance {
            name: name.into(),
            comment: None,
            weight_kind: kind,
            weight_format: None,
            coords: Some(coords),
            clusters,
            vertex_cluster,
            table: None,
        };
        inst.tabulate();
        Ok(inst)
    }

    /// Builds an EXPLICIT instance from a full row-major cost table.
    pub fn from_matrix(
        name: impl Into<String>,
        n: usize,
        costs: Vec<i64>,
        clusters: Vec<Vec<usize>>,
    ) -> Result<Self, InstanceError> {
        if costs.len() != n * n {
            return Err(InstanceError::Invalid(format!(
                "cost table has {} entries, expected {}",
                costs.len(),
                n * n
            )));
        }
        check_table(n, &costs).map_err(|k| InstanceError::Invalid(k.to_string()))?;
        let vertex_cluster = partition_lookup(n, &clusters)?;
        Ok(Instance {
            name: name.into(),
            comment: None,
            weight_kind: WeightKind::Explicit,
            weight_format: Some(MatrixFormat::FullMatrix),
            coords: None,
            clusters,
            vertex_cluster,
            table: Some(costs),
        })
    }

    pub fn from_file(path: impl AsRef<Path>) -> Result<Self, InstanceError> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|source| InstanceError::Io {
            path: path.display().to_string(),
            source,
        })?;
        Ok(parse_gtsplib(&text)?)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn with_comment(mut self, comment: impl Into<String>) -> Self {
        self.comment = Some(comment.into());
        self
    }

    pub fn comment(&self) -> Option<&str> {
        self.comment.as_deref()
    }

    /// Number of vertices.
    pub fn n(&self) -> usize {
        self.vertex_cluster.len()
    }

    /// Number of clusters.
    pub fn m(&self) -> usize {
        self.clusters.len()
    }

    pub fn weight_kind(&self) -> WeightKind {
        self.weight_kind
    }

    pub fn weight_format(&self) -> Option<MatrixFormat> {
        self.weight_format
    }

    /// Coordinates indexed by 0-based vertex.
    pub fn coords(&self) -> Option<&[(f64, f64)]> {
        self.coords.as_deref()
    }

    /// 0-based member lists of every cluster.
    pub fn clusters(&self) -> &[Vec<usize>] {
        &self.clusters
    }

    pub fn cluster_members_idx(&self, cluster: usize) -> &[usize] {
        &self.clusters[cluster]
    }

    #[inline]
    pub fn cluster_of_idx(&self, v: usize) -> usize {
        self.vertex_cluster[v]
    }

    /// Cost between two 0-based vertices. Panics on out-of-range input.
    #[inline]
    pub fn cost_idx(&self, u: usize, v: usize) -> i64 {
        match &self.table {
            Some(t) => t[u * self.n() + v],
            None => self.compute_cost(u, v),
        }
    }

    /// Cost between two 1-based vertices.
    pub fn edge_cost(&self, u: usize, v: usize) -> Result<i64, InstanceError> {
        let u = self.check_vertex(u)?;
        let v = self.check_vertex(v)?;
        Ok(self.cost_idx(u, v))
    }

    /// 1-based cluster containing 1-based vertex `v`.
    pub fn cluster_of(&self, v: usize) -> Result<usize, InstanceError> {
        let v = self.check_vertex(v)?;
        Ok(self.vertex_cluster[v] + 1)
    }

    fn check_vertex(&self, v: usize) -> Result<usize, InstanceError> {
        if v == 0 || v > self.n() {
            Err(InstanceError::VertexOutOfRange {
                index: v,
                n: self.n(),
            })
        } else {
            Ok(v - 1)
        }
    }

    fn compute_cost(&self, u: usize, v: usize) -> i64 {
        if u == v {
            return 0;
        }
        let coords = self
            .coords
            .as_ref()
            .expect("coordinate instance without coordinates");
        coord_cost(self.weight_kind, coords[u], coords[v])
    }

    fn tabulate(&mut self) {
        let n = self.n();
        if self.table.is_some() || n > DENSE_LIMIT {
            return;
        }
        let mut t = vec![0; n * n];
        for u in 0..n {
            for v in (u + 1)..n {
                let c = self.compute_cost(u, v);
                t[u * n + v] = c;
                t[v * n + u] = c;
            }
        }
        self.table = Some(t);
    }

    /// Renders the instance back into GTSPLIB text.
    pub fn to_gtsplib(&self) -> String {
        let n = self.n();
        let mut out = String::new();
        let _ = writeln!(out, "NAME: {}", self.name);
        let _ = writeln!(out, "TYPE: GTSP");
        if let Some(c) = &self.comment {
            let _ = writeln!(out, "COMMENT: {c}");
        }
        let _ = writeln!(out, "DIMENSION: {n}");
        let _ = writeln!(out, "GTSP_SETS: {}", self.m());
        let _ = writeln!(out, "EDGE_WEIGHT_TYPE: {}", self.weight_kind);
        if let Some(coords) = &self.coords {
            let _ = writeln!(out, "NODE_COORD_SECTION");
            for (i, (x, y)) in coords.iter().enumerate() {
                let _ = writeln!(out, "{} {x} {y}", i + 1);
            }
        } else {
            let format = self.weight_format.unwrap_or(MatrixFormat::FullMatrix);
            let _ = writeln!(out, "EDGE_WEIGHT_FORMAT: {}", format.keyword());
            let _ = writeln!(out, "EDGE_WEIGHT_SECTION");
            for u in 0..n {
                let cols: Box<dyn Iterator<Item = usize>> = match format {
                    MatrixFormat::FullMatrix => Box::new(0..n),
                    MatrixFormat::UpperRow => Box::new((u + 1)..n),
                    MatrixFormat::LowerDiagRow => Box::new(0..=u),
                };
                let row: Vec<String> = cols.map(|v| self.cost_idx(u, v).to_string()).collect();
                if !row.is_empty() {
                    let _ = writeln!(out, "{}", row.join(" "));
                }
            }
        }
        let _ = writeln!(out, "GTSP_SET_SECTION");
        for (i, members) in self.clusters.iter().enumerate() {
            let _ = write!(out, "{}", i + 1);
            for v in members {
                let _ = write!(out, " {}", v + 1);
            }
            let _ = writeln!(out, " -1");
        }
        out.push_str("EOF\n");
        out
    }
}

fn nint(x: f64) -> i64 {
    (x + 0.5).floor() as i64
}

fn geo_radians(x: f64) -> f64 {
    // the truncated value the reference distances were computed with
    #[allow(clippy::approx_constant)]
    const PI: f64 = 3.141592;
    let deg = x.trunc();
    let min = x - deg;
    PI * (deg + 5.0 * min / 3.0) / 180.0
}

fn coord_cost(kind: WeightKind, a: (f64, f64), b: (f64, f64)) -> i64 {
    let dx = a.0 - b.0;
    let dy = a.1 - b.1;
    match kind {
        WeightKind::Euc2d => nint((dx * dx + dy * dy).sqrt()),
        WeightKind::Ceil2d => (dx * dx + dy * dy).sqrt().ceil() as i64,
        WeightKind::Att => {
            let r = ((dx * dx + dy * dy) / 10.0).sqrt();
            let t = nint(r);
            if (t as f64) < r {
                t + 1
            } else {
                t
            }
        }
        WeightKind::Geo => {
            const RRR: f64 = 6378.388;
            let (lat_a, lon_a) = (geo_radians(a.0), geo_radians(a.1));
            let (lat_b, lon_b) = (geo_radians(b.0), geo_radians(b.1));
            let q1 = (lon_a - lon_b).cos();
            let q2 = (lat_a - lat_b).cos();
            let q3 = (lat_a + lat_b).cos();
            let arg = (0.5 * ((1.0 + q1) * q2 - (1.0 - q1) * q3)).clamp(-1.0, 1.0);
            (RRR * arg.acos() + 1.0) as i64
        }
        WeightKind::Explicit => unreachable!("explicit costs come from the table"),
    }
}

fn partition_lookup(n: usize, clusters: &[Vec<usize>]) -> Result<Vec<usize>, InstanceError> {
    if n == 0 || clusters.is_empty() {
        return Err(InstanceError::Invalid("instance has no vertices".into()));
    }
    let mut owner = vec![usize::MAX; n];
    for (c, members) in clusters.iter().enumerate() {
        if members.is_empty() {
            return Err(InstanceError::Invalid(format!(
                "cluster {} is empty",
                c + 1
            )));
        }
        for &v in members {
            if v >= n {
                return Err(InstanceError::VertexOutOfRange { index: v + 1, n });
            }
            if owner[v] != usize::MAX {
                return Err(InstanceError::Invalid(format!(
                    "vertex {} appears in clusters {} and {}",
                    v + 1,
                    owner[v] + 1,
                    c + 1
                )));
            }
            owner[v] = c;
        }
    }
    if let Some(v) = owner.iter().position(|&c| c == usize::MAX) {
        return Err(InstanceError::Invalid(format!(
            "vertex {} belongs to no cluster",
            v + 1
        )));
    }
    Ok(owner)
}

fn check_table(n: usize, t: &[i64]) -> Result<(), ParseErrorKind> {
    for u in 0..n {
        for v in 0..n {
            if t[u * n + v] < 0 {
                return Err(ParseErrorKind::NegativeCost(u + 1, v + 1));
            }
            if t[u * n + v] != t[v * n + u] {
                return Err(ParseErrorKind::AsymmetricCosts(u + 1, v + 1));
            }
        }
    }
    Ok(())
}

#[derive(PartialEq)]
enum Section {
    Header,
    Coords,
    Weights,
    Sets,
    Done,
}

fn section_keyword(token: &str) -> Option<&str> {
    let t = token.trim_end_matches(':');
    matches!(
        t,
        "NODE_COORD_SECTION" | "EDGE_WEIGHT_SECTION" | "GTSP_SET_SECTION" | "EOF"
    )
    .then_some(t)
}

fn parse_num<T: FromStr>(tok: &str, line: usize) -> Result<T, ParseError> {
    tok.parse().map_err(|_| ParseError {
        line,
        kind: ParseErrorKind::BadNumber(tok.to_string()),
    })
}

/// Parses GTSPLIB text into a validated [`Instance`].
pub fn parse_gtsplib(text: &str) -> Result<Instance, ParseError> {
    let err = |line: usize, kind: ParseErrorKind| ParseError { line, kind };

    let mut name = None;
    let mut comment = None;
    let mut dimension: Option<usize> = None;
    let mut sets: Option<usize> = None;
    let mut kind: Option<WeightKind> = None;
    let mut format: Option<MatrixFormat> = None;
    let mut ty_seen = false;

    let mut coords: Vec<Option<(f64, f64)>> = Vec::new();
    let mut coord_count = 0usize;
    let mut weights: Vec<i64> = Vec::new();
    let mut clusters: Vec<Option<Vec<usize>>> = Vec::new();
    let mut owner: Vec<usize> = Vec::new();
    let mut set_count = 0usize;
    // (set index, members so far, line the set started on)
    let mut open_set: Option<(usize, Vec<usize>, usize)> = None;

    let mut section = Section::Header;
    let mut section_line = 0usize;
    let mut last_line = 0usize;

    // Closes the section being read when a new keyword (or the end of input)
    // shows up on `line`.
    let finish = |section: &Section,
                  line: usize,
                  coord_count: usize,
                  weights: &Vec<i64>,
                  open_set: &Option<(usize, Vec<usize>, usize)>,
                  set_count: usize,
                  dimension: usize,
                  sets: usize,
                  format: Option<MatrixFormat>|
     -> Result<(), ParseError> {
        match section {
            Section::Coords if coord_count != dimension => Err(err(
                line,
                ParseErrorKind::DimensionMismatch {
                    expected: dimension,
                    found: coord_count,
                },
            )),
            Section::Weights => {
                let expected = format.map(|f| f.entries(dimension)).unwrap_or(0);
                if weights.len() != expected {
                    Err(err(
                        line,
                        ParseErrorKind::DimensionMismatch {
                            expected,
                            found: weights.len(),
                        },
                    ))
                } else {
                    Ok(())
                }
            }
            Section::Sets => {
                if let Some((s, _, _)) = open_set {
                    return Err(err(line, ParseErrorKind::MissingSetTerminator(s + 1)));
                }
                if set_count != sets {
                    return Err(err(
                        line,
                        ParseErrorKind::SetCountMismatch {
                            expected: sets,
                            found: set_count,
                        },
                    ));
                }
                Ok(())
            }
            _ => Ok(()),
        }
    };

    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        last_line = line;
        let trimmed = raw.trim();
        if trimmed.is_empty() {
            continue;
        }
        let first = trimmed.split_whitespace().next().unwrap_or("");

        if section == Section::Done {
            break;
        }

        if let Some(keyword) = section_keyword(first) {
            let n =
                dimension.ok_or_else(|| err(line, ParseErrorKind::MissingField("DIMENSION")))?;
            let m = sets.ok_or_else(|| err(line, ParseErrorKind::MissingField("GTSP_SETS")))?;
            finish(
                &section,
                line,
                coord_count,
                &weights,
                &open_set,
                set_count,
                n,
                m,
                format,
            )?;
            if !ty_seen {
                return Err(err(line, ParseErrorKind::MissingField("TYPE")));
            }
            let k =
                kind.ok_or_else(|| err(line, ParseErrorKind::MissingField("EDGE_WEIGHT_TYPE")))?;
            section_line = line;
            section = match keyword {
                "NODE_COORD_SECTION" => {
                    if k == WeightKind::Explicit {
                        return Err(err(line, ParseErrorKind::UnexpectedSection(keyword.into())));
                    }
                    coords = vec![None; n];
                    Section::Coords
                }
                "EDGE_WEIGHT_SECTION" => {
                    if k != WeightKind::Explicit {
                        return Err(err(line, ParseErrorKind::UnexpectedSection(keyword.into())));
                    }
                    if format.is_none() {
                        return Err(err(
                            line,
                            ParseErrorKind::UnsupportedWeightFormat("(missing)".into()),
                        ));
                    }
                    Section::Weights
                }
                "GTSP_SET_SECTION" => {
                    clusters = vec![None; m];
                    owner = vec![usize::MAX; n];
                    Section::Sets
                }
                _ => Section::Done,
            };
            continue;
        }

        match section {
            Section::Header => {
                let (key, value) = trimmed
                    .split_once(':')
                    .ok_or_else(|| err(line, ParseErrorKind::MalformedHeader(trimmed.into())))?;
                let key = key.trim();
                let value = value.trim();
                match key {
                    "NAME" => name = Some(value.to_string()),
                    "COMMENT" => comment = Some(value.to_string()),
                    "TYPE" => {
                        if value != "GTSP" {
                            return Err(err(line, ParseErrorKind::UnsupportedType(value.into())));
                        }
                        ty_seen = true;
                    }
                    "DIMENSION" => {
                        let n: usize = parse_num(value, line)?;
                        if n == 0 {
                            return Err(err(line, ParseErrorKind::BadNumber(value.into())));
                        }
                        dimension = Some(n);
                    }
                    "GTSP_SETS" => {
                        let m: usize = parse_num(value, line)?;
                        if m == 0 {
                            return Err(err(line, ParseErrorKind::BadNumber(value.into())));
                        }
                        sets = Some(m);
                    }
                    "EDGE_WEIGHT_TYPE" => {
                        kind = Some(value.parse().map_err(|_| {
                            err(line, ParseErrorKind::UnsupportedWeightType(value.into()))
                        })?)
                    }
                    "EDGE_WEIGHT_FORMAT" => {
                        format = Some(value.parse().map_err(|_| {
                            err(line, ParseErrorKind::UnsupportedWeightFormat(value.into()))
                        })?)
                    }
                    "NODE_COORD_TYPE" | "DISPLAY_DATA_TYPE" => {}
                    _ => return Err(err(line, ParseErrorKind::MalformedHeader(trimmed.into()))),
                }
            }
            Section::Coords => {
                let toks: Vec<&str> = trimmed.split_whitespace().collect();
                if toks.len() != 3 {
                    return Err(err(line, ParseErrorKind::MalformedHeader(trimmed.into())));
                }
                let idx: i64 = parse_num(toks[0], line)?;
                let x: f64 = parse_num(toks[1], line)?;
                let y: f64 = parse_num(toks[2], line)?;
                if idx < 1 || idx as usize > coords.len() {
                    return Err(err(
                        line,
                        ParseErrorKind::DimensionMismatch {
                            expected: coords.len(),
                            found: idx.max(0) as usize,
                        },
                    ));
                }
                let slot = &mut coords[idx as usize - 1];
                if slot.is_some() {
                    return Err(err(line, ParseErrorKind::DuplicateCoordinate(idx as usize)));
                }
                *slot = Some((x, y));
                coord_count += 1;
            }
            Section::Weights => {
                for tok in trimmed.split_whitespace() {
                    weights.push(parse_num(tok, line)?);
                }
            }
            Section::Sets => {
                let n = owner.len();
                for tok in trimmed.split_whitespace() {
                    let value: i64 = parse_num(tok, line)?;
                    match open_set.as_mut() {
                        None => {
                            if value < 1
                                || value as usize > clusters.len()
                                || clusters[value as usize - 1].is_some()
                            {
                                return Err(err(line, ParseErrorKind::BadSetId(value)));
                            }
                            open_set = Some((value as usize - 1, Vec::new(), line));
                        }
                        Some((s, members, _)) => {
                            if value == -1 {
                                let s = *s;
                                if members.is_empty() {
                                    return Err(err(line, ParseErrorKind::EmptySet(s + 1)));
                                }
                                clusters[s] = Some(std::mem::take(members));
                                open_set = None;
                                set_count += 1;
                            } else {
                                if value < 1 || value as usize > n {
                                    return Err(err(line, ParseErrorKind::VertexOutOfRange(value)));
                                }
                                let v = value as usize - 1;
                                if owner[v] != usize::MAX {
                                    return Err(err(
                                        line,
                                        ParseErrorKind::DuplicateVertex {
                                            vertex: v + 1,
                                            first: owner[v] + 1,
                                            second: *s + 1,
                                        },
                                    ));
                                }
                                owner[v] = *s;
                                members.push(v);
                            }
                        }
                    }
                }
            }
            Section::Done => unreachable!(),
        }
    }

    let end_line = last_line + 1;
    let n = dimension.ok_or_else(|| err(end_line, ParseErrorKind::MissingField("DIMENSION")))?;
    let m = sets.ok_or_else(|| err(end_line, ParseErrorKind::MissingField("GTSP_SETS")))?;
    if section != Section::Done {
        finish(
            &section,
            end_line,
            coord_count,
            &weights,
            &open_set,
            set_count,
            n,
            m,
            format,
        )?;
    }
    let kind =
        kind.ok_or_else(|| err(end_line, ParseErrorKind::MissingField("EDGE_WEIGHT_TYPE")))?;
    if clusters.is_empty() {
        return Err(err(
            end_line,
            ParseErrorKind::MissingField("GTSP_SET_SECTION"),
        ));
    }
    if let Some(v) = owner.iter().position(|&c| c == usize::MAX) {
        return Err(err(end_line, ParseErrorKind::UncoveredVertex(v + 1)));
    }
    let clusters: Vec<Vec<usize>> = clusters
        .into_iter()
        .map(|c| c.unwrap_or_default())
        .collect();

    let mut inst = Instance {
        name: name.unwrap_or_default(),
        comment,
        weight_kind: kind,
        weight_format: None,
        coords: None,
        clusters,
        vertex_cluster: owner,
        table: None,
    };

    if kind == WeightKind::Explicit {
        let format = format.ok_or_else(|| {
            err(
                end_line,
                ParseErrorKind::UnsupportedWeightFormat("(missing)".into()),
            )
        })?;
        if weights.is_empty() {
            return Err(err(
                end_line,
                ParseErrorKind::MissingField("EDGE_WEIGHT_SECTION"),
            ));
        }
        let table = expand_table(n, format, &weights);
        check_table(n, &table).map_err(|k| err(section_line, k))?;
        inst.weight_format = Some(format);
        inst.table = Some(table);
    } else {
        if coords.is_empty() {
            return Err(err(
                end_line,
                ParseErrorKind::MissingField("NODE_COORD_SECTION"),
            ));
        }
        inst.coords = Some(coords.into_iter().map(|c| c.unwrap_or_default()).collect());
        inst.tabulate();
    }
    Ok(inst)
}

fn expand_table(n: usize, format: MatrixFormat, w: &[i64]) -> Vec<i64> {
    let mut t = vec![0; n * n];
    let mut it = w.iter().copied();
    for u in 0..n {
        match format {
            MatrixFormat::FullMatrix => {
                for v in 0..n {
                    t[u * n + v] = it.next().unwrap_or(0);
                }
            }
            MatrixFormat::UpperRow => {
                for v in (u + 1)..n {
                    let c = it.next().unwrap_or(0);
                    t[u * n + v] = c;
                    t[v * n + u] = c;
                }
            }
            MatrixFormat::LowerDiagRow => {
                for v in 0..=u {
                    let c = it.next().unwrap_or(0);
                    t[u * n + v] = c;
                    t[v * n + u] = c;
                }
            }
        }
    }
    for u in 0..n {
        t[u * n + u] = 0;
    }
    t
}
