//! End-to-end weighted-graph codec.
//!
//! The topology is coded losslessly; the mean edge weight is sent as is and
//! the centered weights are analyzed by a graph filter bank built from the
//! topology alone, sparsified, quantized and entropy coded. Because the decoder derives the transform from the
//! topology and the header, changing the operating point never requires
//! re-signaling the topology.

mod bitstream;
mod entropy;
mod huffman;
mod quant;
mod topology;
mod varint;

pub use bitstream::{Bitstream, Header, FORMAT_VERSION, HEADER_BYTES, MAGIC};
pub use entropy::{entropy_decode, entropy_encode};
pub use huffman::{CodeLengths, MAX_CODE_LEN};
pub use quant::{check_rho, dequantize, keep_count, nla_threshold, quantize, MAX_BIN};
pub use topology::{decode_topology, encode_topology, slot_count, slot_index};
pub use varint::{unzigzag, zigzag};

use crate::error::{Error, Result};
use crate::filterbank::{
    design_biorthogonal, harary_decompose, BipartiteDecomposition, GraphFilterBank, SubbandCoefficients, MAX_ORDER,
};
use crate::graph::UGraph;
use crate::line_graph::{coupling_matrix, line_graph, OperatorMode};

/// Smallest weight a decoded edge may carry.
pub const MIN_WEIGHT: f64 = 1e-9;

/// Largest number of Harary levels the header can signal.
pub const MAX_LEVELS: usize = 3;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CodecConfig {
    pub quant_step: f64,
    /// NLA keep fraction ρ in `(0, 1]`.
    pub keep_fraction: f64,
    pub operator_mode: OperatorMode,
    /// Filter order K (even, the total zero count at λ = 2).
    pub filter_order: usize,
    /// Cap on the number of Harary levels used by the filter bank.
    pub m_max: usize,
    pub format_version: u8,
}

impl Default for CodecConfig {
    fn default() -> Self {
        Self {
            quant_step: 0.01,
            keep_fraction: 1.0,
            operator_mode: OperatorMode::Line,
            filter_order: 8,
            m_max: 2,
            format_version: FORMAT_VERSION,
        }
    }
}

impl CodecConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.quant_step > 0.0 && self.quant_step.is_finite()) {
            return Err(Error::InvalidConfig(format!(
                "quantization step must be positive, got {}",
                self.quant_step
            )));
        }
        check_rho(self.keep_fraction)?;
        if self.filter_order < 2 || !self.filter_order.is_multiple_of(2) || self.filter_order > MAX_ORDER {
            return Err(Error::InvalidConfig(format!(
                "filter order must be even in 2..={MAX_ORDER}, got {}",
                self.filter_order
            )));
        }
        if self.m_max > MAX_LEVELS {
            return Err(Error::InvalidConfig(format!(
                "m_max must be at most {MAX_LEVELS}, got {}",
                self.m_max
            )));
        }
        if self.format_version != FORMAT_VERSION {
            return Err(Error::InvalidConfig(format!(
                "unsupported format version {}",
                self.format_version
            )));
        }
        Ok(())
    }

    fn from_header(h: &Header) -> Result<Self> {
        let cfg = Self {
            quant_step: h.quant_step,
            keep_fraction: h.keep_fraction,
            operator_mode: h.mode,
            filter_order: h.filter_order as usize,
            m_max: h.m_max as usize,
            format_version: h.version,
        };
        cfg.validate().map_err(|e| {
            Error::Decode(crate::DecodeError::Malformed {
                section: "header",
                reason: e.to_string(),
            })
        })?;
        Ok(cfg)
    }
}

/// Edge-domain transform derived from topology and configuration only.
#[derive(Debug, Clone)]
pub struct EdgeTransform {
    decomposition: BipartiteDecomposition,
    bank: GraphFilterBank,
    lengths: Vec<usize>,
}

impl EdgeTransform {
    /// Builds the transform for the (non-empty) edge set of `g`; weights are
    /// ignored.
    pub fn new(g: &UGraph, mode: OperatorMode, filter_order: usize, m_max: usize) -> Result<Self> {
        let topo = g.binary();
        let lg = line_graph(&topo)?;
        let couplings = coupling_matrix(&lg, &topo, mode)?;
        let decomposition = harary_decompose(lg.adjacency(), m_max);
        let kernels = design_biorthogonal(filter_order)?;
        let bank = GraphFilterBank::new(&couplings, &decomposition, &kernels)?;
        let lengths = bank.channel_members().iter().map(Vec::len).collect();
        Ok(Self {
            decomposition,
            bank,
            lengths,
        })
    }

    pub fn decomposition(&self) -> &BipartiteDecomposition {
        &self.decomposition
    }

    pub fn filter_bank(&self) -> &GraphFilterBank {
        &self.bank
    }

    pub fn channel_lengths(&self) -> &[usize] {
        &self.lengths
    }

    /// Flat coefficient vector, channels concatenated.
    pub fn analyze(&self, f: &[f64]) -> Result<Vec<f64>> {
        Ok(self.bank.analyze(f)?.flatten())
    }

    pub fn synthesize(&self, flat: &[f64]) -> Result<Vec<f64>> {
        self.bank
            .synthesize(&SubbandCoefficients::from_flat(flat, &self.lengths)?)
    }

    /// FNV-1a digest over the colors, sampling sets, level operators and
    /// filter coefficients. Two transforms with equal fingerprints apply
    /// bit-identical arithmetic.
    pub fn fingerprint(&self) -> u64 {
        let mut h = Fnv::new();
        for &c in self.decomposition.colors() {
            h.write(&c.to_le_bytes());
        }
        for members in self.bank.channel_members() {
            h.write(&(members.len() as u64).to_le_bytes());
            for &v in members {
                h.write(&(v as u64).to_le_bytes());
            }
        }
        for op in self.bank.level_operators() {
            for (i, j, v) in op.matrix.entries() {
                h.write(&(i as u64).to_le_bytes());
                h.write(&(j as u64).to_le_bytes());
                h.write(&v.to_bits().to_le_bytes());
            }
            for s in &op.sqrt_degree {
                h.write(&s.to_bits().to_le_bytes());
            }
        }
        let k = self.bank.kernels();
        for p in [&k.h0, &k.h1, &k.g0, &k.g1] {
            h.write(&(p.coeffs().len() as u64).to_le_bytes());
            for c in p.coeffs() {
                h.write(&c.to_bits().to_le_bytes());
            }
        }
        h.0
    }
}

struct Fnv(u64);

impl Fnv {
    fn new() -> Self {
        Fnv(0xcbf2_9ce4_8422_2325)
    }

    fn write(&mut self, bytes: &[u8]) {
        for &b in bytes {
            self.0 ^= b as u64;
            self.0 = self.0.wrapping_mul(0x0000_0100_0000_01b3);
        }
    }
}

/// Encoder bound to one graph. Topology bytes and subband coefficients are
/// computed once; [`encode`](Self::encode) only reruns NLA, quantization and
/// entropy coding.
#[derive(Debug, Clone)]
pub struct Encoder {
    n: usize,
    m: usize,
    mode: OperatorMode,
    filter_order: usize,
    m_max: usize,
    topology: Vec<u8>,
    offset: f64,
    coefficients: Vec<f64>,
    transform: Option<EdgeTransform>,
}

impl Encoder {
    pub fn new(g: &UGraph, mode: OperatorMode, filter_order: usize, m_max: usize) -> Result<Self> {
        CodecConfig {
            operator_mode: mode,
            filter_order,
            m_max,
            ..CodecConfig::default()
        }
        .validate()?;
        let topology = encode_topology(g.node_count(), g.edges());
        let (transform, offset, coefficients) = if g.edge_count() == 0 {
            (None, 0.0, Vec::new())
        } else {
            let t = EdgeTransform::new(g, mode, filter_order, m_max)?;
            let offset = g.weights().iter().sum::<f64>() / g.edge_count() as f64;
            let centered: Vec<f64> = g.weights().iter().map(|w| w - offset).collect();
            let c = t.analyze(&centered)?;
            (Some(t), offset, c)
        };
        Ok(Self {
            n: g.node_count(),
            m: g.edge_count(),
            mode,
            filter_order,
            m_max,
            topology,
            offset,
            coefficients,
            transform,
        })
    }

    pub fn transform(&self) -> Option<&EdgeTransform> {
        self.transform.as_ref()
    }

    /// Subband coefficients of the centered weights.
    pub fn coefficients(&self) -> &[f64] {
        &self.coefficients
    }

    /// Mean edge weight, subtracted before analysis.
    pub fn offset(&self) -> f64 {
        self.offset
    }

    pub fn topology(&self) -> &[u8] {
        &self.topology
    }

    pub fn encode(&self, keep_fraction: f64, quant_step: f64) -> Result<Bitstream> {
        let cfg = CodecConfig {
            quant_step,
            keep_fraction,
            operator_mode: self.mode,
            filter_order: self.filter_order,
            m_max: self.m_max,
            format_version: FORMAT_VERSION,
        };
        cfg.validate()?;
        let (sparse, _) = nla_threshold(&self.coefficients, keep_fraction)?;
        let q = quantize(&sparse, quant_step)?;
        Ok(Bitstream {
            header: Header {
                version: FORMAT_VERSION,
                mode: self.mode,
                m_max: self.m_max as u8,
                n: to_u32(self.n, "node count")?,
                m: to_u32(self.m, "edge count")?,
                quant_step,
                keep_fraction,
                filter_order: self.filter_order as u8,
            },
            topology: self.topology.clone(),
            weights: encode_weights(self.offset, &q),
        })
    }
}

/// Weights section: the mean weight as f64 LE, then the entropy-coded
/// quantized coefficients.
pub fn encode_weights(offset: f64, q: &[i64]) -> Vec<u8> {
    let mut out = offset.to_le_bytes().to_vec();
    out.extend(entropy_encode(q));
    out
}

/// Splits a weights section into the mean weight and the `m` quantized
/// coefficients.
pub fn decode_weights(bytes: &[u8], m: usize) -> std::result::Result<(f64, Vec<i64>), crate::DecodeError> {
    let (head, rest) = bytes
        .split_first_chunk::<8>()
        .ok_or(crate::DecodeError::Truncated { section: "weights/offset" })?;
    let offset = f64::from_le_bytes(*head);
    if !offset.is_finite() {
        return Err(crate::DecodeError::Malformed {
            section: "weights/offset",
            reason: "non-finite mean weight".into(),
        });
    }
    Ok((offset, entropy_decode(rest, m)?))
}

fn to_u32(v: usize, what: &str) -> Result<u32> {
    u32::try_from(v).map_err(|_| Error::InvalidGraph(format!("{what} {v} exceeds the u32 header field")))
}

pub fn compress(g: &UGraph, cfg: &CodecConfig) -> Result<Bitstream> {
    cfg.validate()?;
    Encoder::new(g, cfg.operator_mode, cfg.filter_order, cfg.m_max)?.encode(cfg.keep_fraction, cfg.quant_step)
}

/// Decoder side of the codec: everything but the weights section is
/// recomputed from the topology and the header.
#[derive(Debug, Clone)]
pub struct Decoded {
    pub graph: UGraph,
    pub config: CodecConfig,
    pub transform: Option<EdgeTransform>,
}

pub fn decompress(b: &Bitstream) -> Result<UGraph> {
    Ok(decompress_with_transform(b)?.graph)
}

pub fn decompress_with_transform(b: &Bitstream) -> Result<Decoded> {
    if b.header.version != FORMAT_VERSION {
        return Err(crate::DecodeError::UnsupportedVersion(b.header.version).into());
    }
    let config = CodecConfig::from_header(&b.header)?;
    let n = b.header.n as usize;
    let m = b.header.m as usize;
    let edges = decode_topology(&b.topology, n, m)?;
    let topo = UGraph::from_topology(n, &edges).map_err(|e| {
        Error::Decode(crate::DecodeError::Malformed {
            section: "topology",
            reason: e.to_string(),
        })
    })?;
    if m == 0 {
        decode_weights(&b.weights, 0)?;
        return Ok(Decoded {
            graph: topo,
            config,
            transform: None,
        });
    }
    let transform = EdgeTransform::new(&topo, config.operator_mode, config.filter_order, config.m_max)?;
    let (offset, q) = decode_weights(&b.weights, m)?;
    let f = transform.synthesize(&dequantize(&q, config.quant_step))?;
    let weights = f.into_iter().map(|w| (w + offset).max(MIN_WEIGHT)).collect();
    Ok(Decoded {
        graph: topo.with_weights(weights)?,
        config,
        transform: Some(transform),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample_graph() -> UGraph {
        let edges = (0..12).flat_map(|i| [(i, (i + 1) % 12), (i, (i + 5) % 12)]);
        let mut seen = std::collections::BTreeSet::new();
        let list: Vec<_> = edges
            .filter_map(|(a, b)| {
                let e = (a.min(b), a.max(b));
                seen.insert(e).then_some(e)
            })
            .enumerate()
            .map(|(k, (a, b))| (a, b, 0.5 + 0.1 * (k % 7) as f64))
            .collect();
        UGraph::new(12, list).unwrap()
    }

    #[test]
    fn round_trip_fine_step() {
        let g = sample_graph();
        for mode in [OperatorMode::Line, OperatorMode::Edge] {
            let cfg = CodecConfig {
                quant_step: 1e-7,
                operator_mode: mode,
                ..CodecConfig::default()
            };
            let b = compress(&g, &cfg).unwrap();
            let back = decompress(&Bitstream::from_bytes(&b.to_bytes()).unwrap()).unwrap();
            assert_eq!(back.edges(), g.edges());
            let err = back
                .weights()
                .iter()
                .zip(g.weights())
                .map(|(a, b)| (a - b).abs())
                .fold(0.0, f64::max);
            assert!(err < 1e-5, "{mode:?}: {err}");
        }
    }

    #[test]
    fn empty_edge_set() {
        let g = UGraph::new(5, []).unwrap();
        let b = compress(&g, &CodecConfig::default()).unwrap();
        assert!(b.topology.is_empty());
        let back = decompress(&b).unwrap();
        assert_eq!((back.node_count(), back.edge_count()), (5, 0));
    }

    #[test]
    fn decoder_rebuilds_encoder_transform() {
        let g = sample_graph();
        let enc = Encoder::new(&g, OperatorMode::Edge, 6, 3).unwrap();
        let b = enc.encode(0.3, 0.01).unwrap();
        let dec = decompress_with_transform(&b).unwrap();
        assert_eq!(
            dec.transform.unwrap().fingerprint(),
            enc.transform().unwrap().fingerprint()
        );
    }

    #[test]
    fn config_validation() {
        let bad = [
            CodecConfig { quant_step: 0.0, ..Default::default() },
            CodecConfig { keep_fraction: 0.0, ..Default::default() },
            CodecConfig { keep_fraction: 1.1, ..Default::default() },
            CodecConfig { filter_order: 7, ..Default::default() },
            CodecConfig { m_max: 4, ..Default::default() },
            CodecConfig { format_version: 2, ..Default::default() },
        ];
        for cfg in bad {
            assert!(cfg.validate().is_err(), "{cfg:?}");
        }
        assert!(CodecConfig::default().validate().is_ok());
    }
}
