use std::path::{Path, PathBuf};

use bsfem::mesh::{BasisFamily, Case};
use bsfem::verify::{all_pairings, Method};
use clap::Args;
use serde::{Deserialize, Serialize};

use crate::CliError;

/// Flags shared by `run` and `matrix`. A JSON config file may set any of
/// them; flags given on the command line win, and switches can only be
/// turned on.
#[derive(Debug, Clone, Default, Args, Deserialize)]
#[serde(default, deny_unknown_fields, rename_all = "kebab-case")]
pub struct RunArgs {
    /// `proposed` (B-spline global basis) or `conventional` (Lagrange).
    #[arg(long, value_parser = parse_method)]
    pub method: Option<Method>,

    /// Global basis, e.g. `bspline:3` or `lagrange:2`.
    #[arg(long, value_parser = parse_family)]
    pub global_basis: Option<BasisFamily>,

    /// Local Lagrange order(s) 1..=3; comma list allowed for `matrix`.
    #[arg(long, value_delimiter = ',')]
    pub local_order: Option<Vec<usize>>,

    /// Element size ratio case(s), `A` (4:3) or `B` (2:1); comma list allowed for `matrix`.
    #[arg(long, value_delimiter = ',', value_parser = parse_case)]
    #[serde(deserialize_with = "cases")]
    pub case: Option<Vec<Case>>,

    /// Global elements per axis, single value or comma list.
    #[arg(long, value_delimiter = ',')]
    pub elems: Option<Vec<usize>>,

    /// Gauss points per axis for assembly, overriding the case default.
    #[arg(long)]
    pub quad: Option<usize>,

    /// Run the Cholesky definiteness test on every system.
    #[arg(long)]
    pub spd: bool,

    /// Sweep assembly quadrature from p+1 to p+10 points.
    #[arg(long)]
    pub sensitivity: bool,

    /// Write the per-local-element error field.
    #[arg(long)]
    pub error_field: bool,

    /// Write the reduced stiffness matrix in Matrix Market format.
    #[arg(long)]
    pub export_matrix: bool,

    /// Output directory.
    #[arg(long)]
    pub out: Option<PathBuf>,

    /// Worker threads.
    #[arg(long)]
    pub jobs: Option<usize>,

    /// Reuse points whose outputs already exist.
    #[arg(long)]
    pub resume: bool,

    /// JSON file with any of the options above (kebab-case keys).
    #[arg(long)]
    #[serde(skip)]
    pub config: Option<PathBuf>,
}

fn cases<'de, D: serde::Deserializer<'de>>(d: D) -> Result<Option<Vec<Case>>, D::Error> {
    #[derive(Deserialize)]
    #[serde(untagged)]
    enum OneOrMany {
        One(String),
        Many(Vec<String>),
    }
    let raw = Option::<OneOrMany>::deserialize(d)?;
    raw.map(|r| {
        let items = match r {
            OneOrMany::One(s) => vec![s],
            OneOrMany::Many(v) => v,
        };
        items.iter().map(|s| s.parse::<Case>().map_err(serde::de::Error::custom)).collect()
    })
    .transpose()
}

fn parse_method(s: &str) -> Result<Method, String> {
    s.parse().map_err(|e: bsfem::Error| e.to_string())
}

fn parse_family(s: &str) -> Result<BasisFamily, String> {
    s.parse().map_err(|e: bsfem::Error| e.to_string())
}

fn parse_case(s: &str) -> Result<Case, String> {
    s.parse().map_err(|e: bsfem::Error| e.to_string())
}

impl RunArgs {
    /// Fills unset fields from the JSON file named by `--config`, if any.
    pub fn merged(self) -> Result<RunArgs, CliError> {
        let Some(path) = self.config.clone() else {
            return Ok(self);
        };
        let file = load(&path)?;
        Ok(RunArgs {
            method: self.method.or(file.method),
            global_basis: self.global_basis.or(file.global_basis),
            local_order: self.local_order.or(file.local_order),
            case: self.case.or(file.case),
            elems: self.elems.or(file.elems),
            quad: self.quad.or(file.quad),
            spd: self.spd || file.spd,
            sensitivity: self.sensitivity || file.sensitivity,
            error_field: self.error_field || file.error_field,
            export_matrix: self.export_matrix || file.export_matrix,
            out: self.out.or(file.out),
            jobs: self.jobs.or(file.jobs),
            resume: self.resume || file.resume,
            config: Some(path),
        })
    }
}

fn load(path: &Path) -> Result<RunArgs, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    serde_json::from_str(&text).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))
}

/// One pairing at one mesh.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct GridPoint {
    pub case: Case,
    pub global: BasisFamily,
    pub local_order: usize,
    pub elements: usize,
}

impl GridPoint {
    /// File stem, e.g. `A_bspline3_q1_n6`.
    pub fn key(&self) -> String {
        format!("{}_{}{}_q{}_n{}", self.case, self.global.name(), self.global.order(), self.local_order, self.elements)
    }
}

/// Validated settings of one invocation.
#[derive(Debug, Clone, Serialize)]
pub struct RunConfig {
    pub points: Vec<GridPoint>,
    pub quad: Option<usize>,
    pub spd: bool,
    pub sensitivity: bool,
    pub error_field: bool,
    pub export_matrix: bool,
    pub out: PathBuf,
    pub jobs: usize,
    pub resume: bool,
}

pub const DEFAULT_ELEMS: [usize; 4] = [6, 9, 12, 15];

impl RunConfig {
    /// A single pairing over one or more meshes.
    pub fn single(args: RunArgs) -> Result<RunConfig, CliError> {
        let global = args.global_basis.ok_or_else(|| CliError::Usage("`run` needs --global-basis".into()))?;
        let method = args.method.unwrap_or(Method::of(global));
        method.validate(global).map_err(|e| CliError::Usage(e.to_string()))?;
        let q = match args.local_order.as_deref() {
            Some([q]) => *q,
            Some(_) => return Err(CliError::Usage("`run` takes a single --local-order".into())),
            None => return Err(CliError::Usage("`run` needs --local-order".into())),
        };
        check_local_order(q)?;
        let case = match args.case.as_deref() {
            Some([c]) => *c,
            Some(_) => return Err(CliError::Usage("`run` takes a single --case".into())),
            None => return Err(CliError::Usage("`run` needs --case".into())),
        };
        let elems = args.elems.clone().ok_or_else(|| CliError::Usage("`run` needs --elems".into()))?;
        let points = elems.iter().map(|&n| GridPoint { case, global, local_order: q, elements: n }).collect();
        Self::finish(points, &args)
    }

    /// Every pairing and case allowed by the filters, over the mesh list.
    pub fn grid(args: RunArgs) -> Result<RunConfig, CliError> {
        for &q in args.local_order.iter().flatten() {
            check_local_order(q)?;
        }
        if let (Some(m), Some(g)) = (args.method, args.global_basis) {
            m.validate(g).map_err(|e| CliError::Usage(e.to_string()))?;
        }
        if let Some(g) = args.global_basis {
            Method::of(g).validate(g).map_err(|e| CliError::Usage(e.to_string()))?;
        }
        let cases = args.case.clone().unwrap_or_else(|| vec![Case::A, Case::B]);
        let elems = args.elems.clone().unwrap_or_else(|| DEFAULT_ELEMS.to_vec());
        let mut points = Vec::new();
        for &case in &cases {
            for (global, q) in all_pairings() {
                let keep = args.method.is_none_or(|m| Method::of(global) == m)
                    && args.global_basis.is_none_or(|g| g == global)
                    && args.local_order.as_ref().is_none_or(|qs| qs.contains(&q));
                if keep {
                    points.extend(elems.iter().map(|&n| GridPoint { case, global, local_order: q, elements: n }));
                }
            }
        }
        if points.is_empty() {
            return Err(CliError::Usage("the filters select no pairing".into()));
        }
        Self::finish(points, &args)
    }

    fn finish(points: Vec<GridPoint>, args: &RunArgs) -> Result<RunConfig, CliError> {
        for p in &points {
            if p.elements == 0 {
                return Err(CliError::Usage("--elems must be positive".into()));
            }
            bsfem::mesh::SuperposedModel::for_case(p.global, p.elements, p.local_order, p.case)
                .map_err(|e| CliError::Usage(format!("{}: {e}", p.key())))?;
        }
        if let Some(n) = args.quad {
            if !(1..=bsfem::quadrature::MAX_ORDER).contains(&n) {
                return Err(CliError::Usage(format!("--quad must be in 1..={}", bsfem::quadrature::MAX_ORDER)));
            }
        }
        let jobs = args.jobs.unwrap_or(1);
        if jobs == 0 {
            return Err(CliError::Usage("--jobs must be at least 1".into()));
        }
        Ok(RunConfig {
            points,
            quad: args.quad,
            spd: args.spd,
            sensitivity: args.sensitivity,
            error_field: args.error_field,
            export_matrix: args.export_matrix,
            out: args.out.clone().unwrap_or_else(|| PathBuf::from("bsfem-out")),
            jobs,
            resume: args.resume,
        })
    }
}

fn check_local_order(q: usize) -> Result<(), CliError> {
    if (1..=3).contains(&q) {
        Ok(())
    } else {
        Err(CliError::Usage(format!("--local-order must be 1, 2 or 3, got {q}")))
    }
}
