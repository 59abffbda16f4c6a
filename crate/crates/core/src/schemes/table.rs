use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::{check_input_size, MonotoneScheme, Sample, SideInfo};
use crate::{Error, PointSet, Result};

/// A finite scheme given by lookup tables.
///
/// JSON form: `{"d": 1, "sigma": [[S, S'], ...], "eta": [[S', set], ...]}`.
/// Entries may carry side information as a third element placed after the
/// compressed sample: `[S, S', side]` and `[S', side, set]`.
///
/// Compression looks a sample up verbatim, then by its sorted de-duplicated
/// form. Reconstruction of an unlisted compressed sample is the empty set.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(into = "TableFile", try_from = "TableFile")]
pub struct TableScheme {
    d: usize,
    max_input: Option<usize>,
    side_bits: u32,
    sigma: BTreeMap<Sample, (Sample, u64)>,
    eta: BTreeMap<(Sample, u64), PointSet>,
}

impl TableScheme {
    pub fn new(d: usize) -> Self {
        TableScheme { d, ..Default::default() }
    }

    pub fn with_max_input(mut self, max: usize) -> Self {
        self.max_input = Some(max);
        self
    }

    pub fn with_side_bits(mut self, bits: u32) -> Self {
        self.side_bits = bits;
        self
    }

    pub fn insert_sigma(&mut self, input: Sample, output: Sample, side: u64) {
        self.sigma.insert(input, (output, side));
    }

    pub fn insert_eta(&mut self, compressed: Sample, side: u64, set: PointSet) {
        self.eta.insert((compressed, side), set);
    }

    pub fn sigma_len(&self) -> usize {
        self.sigma.len()
    }

    pub fn eta_len(&self) -> usize {
        self.eta.len()
    }

    pub fn side_bits(&self) -> u32 {
        self.side_bits
    }

    /// Tabulates `scheme` on the given samples. Every compression they
    /// produce gets an η entry.
    pub fn tabulate<'a>(
        scheme: &dyn MonotoneScheme,
        samples: impl IntoIterator<Item = &'a Sample>,
    ) -> Result<Self> {
        let mut t = TableScheme::new(scheme.size_bound());
        t.max_input = scheme.max_input();
        for s in samples {
            let (c, side) = scheme.compress(s)?;
            t.side_bits = t.side_bits.max(side.bits);
            if let std::collections::btree_map::Entry::Vacant(e) = t.eta.entry((c.clone(), side.value)) {
                e.insert(scheme.reconstruct(&c, side)?);
            }
            t.sigma.insert(s.clone(), (c, side.value));
        }
        Ok(t)
    }
}

impl MonotoneScheme for TableScheme {
    fn size_bound(&self) -> usize {
        self.d
    }

    fn max_input(&self) -> Option<usize> {
        self.max_input
    }

    fn compress(&self, sample: &Sample) -> Result<(Sample, SideInfo)> {
        check_input_size(self.max_input, sample)?;
        let hit = self
            .sigma
            .get(sample)
            .or_else(|| self.sigma.get(&Sample::canonical(&sample.to_set())));
        match hit {
            Some((c, side)) => Ok((c.clone(), SideInfo::new(*side, self.side_bits)?)),
            None if sample.is_empty() => Ok((Sample::empty(), SideInfo::NONE)),
            None => Err(Error::UnsupportedSample(format!("{sample:?} has no sigma entry"))),
        }
    }

    fn reconstruct(&self, compressed: &Sample, side: SideInfo) -> Result<PointSet> {
        side.check()?;
        if side.value != 0 && self.side_bits == 0 {
            return Err(Error::InvalidSideInfo { value: side.value, bits: 0 });
        }
        Ok(self.eta.get(&(compressed.clone(), side.value)).cloned().unwrap_or_default())
    }
}

#[derive(Serialize, Deserialize)]
struct TableFile {
    d: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    max_input: Option<usize>,
    #[serde(default, skip_serializing_if = "is_zero")]
    side_bits: u32,
    #[serde(default)]
    sigma: Vec<SigmaEntry>,
    #[serde(default)]
    eta: Vec<EtaEntry>,
}

fn is_zero(v: &u32) -> bool {
    *v == 0
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum SigmaEntry {
    Plain(Sample, Sample),
    Side(Sample, Sample, u64),
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum EtaEntry {
    Plain(Sample, PointSet),
    Side(Sample, u64, PointSet),
}

impl From<TableScheme> for TableFile {
    fn from(t: TableScheme) -> Self {
        TableFile {
            d: t.d,
            max_input: t.max_input,
            side_bits: t.side_bits,
            sigma: t
                .sigma
                .into_iter()
                .map(|(s, (c, side))| match side {
                    0 => SigmaEntry::Plain(s, c),
                    v => SigmaEntry::Side(s, c, v),
                })
                .collect(),
            eta: t
                .eta
                .into_iter()
                .map(|((c, side), set)| match side {
                    0 => EtaEntry::Plain(c, set),
                    v => EtaEntry::Side(c, v, set),
                })
                .collect(),
        }
    }
}

impl TryFrom<TableFile> for TableScheme {
    type Error = String;

    fn try_from(f: TableFile) -> std::result::Result<Self, String> {
        let mut t = TableScheme::new(f.d);
        t.max_input = f.max_input;
        t.side_bits = f.side_bits;
        for e in f.sigma {
            let (s, c, side) = match e {
                SigmaEntry::Plain(s, c) => (s, c, 0),
                SigmaEntry::Side(s, c, v) => (s, c, v),
            };
            if !SideInfo::new(side, t.side_bits).is_ok() {
                return Err(format!("sigma side value {side} exceeds side_bits {}", t.side_bits));
            }
            if t.sigma.insert(s.clone(), (c, side)).is_some() {
                return Err(format!("duplicate sigma entry for {s:?}"));
            }
        }
        for e in f.eta {
            let (c, side, set) = match e {
                EtaEntry::Plain(c, set) => (c, 0, set),
                EtaEntry::Side(c, v, set) => (c, v, set),
            };
            if t.eta.insert((c.clone(), side), set).is_some() {
                return Err(format!("duplicate eta entry for {c:?}"));
            }
        }
        Ok(t)
    }
}
