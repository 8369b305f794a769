//! Python bindings: vector registers, decoded instructions, both unit
//! models, the golden reference and the differential campaign runner.
//!
//! Element widths are plain ints (8, 16, 32) and masks are lists of
//! bools, so Python callers only deal in native types plus the two
//! wrapper classes below.

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::{PyBytes, PyDict};

use permsim_core as core;
use permsim_core::{ElemWidth, MaskReg, UnitChoice};

fn sew_from_bits(bits: usize) -> PyResult<ElemWidth> {
    ElemWidth::from_bits(bits)
        .ok_or_else(|| PyValueError::new_err(format!("sew must be 8, 16 or 32, got {bits}")))
}

fn value_err(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

/// A vlen-bit vector register.
#[pyclass(name = "VectorReg", eq, skip_from_py_object)]
#[derive(Clone, PartialEq)]
struct PyVectorReg {
    inner: core::VectorReg,
}

#[pymethods]
impl PyVectorReg {
    /// Zero register of the given width in bits.
    #[new]
    fn new(vlen: usize) -> PyResult<Self> {
        if vlen == 0 || vlen % 8 != 0 {
            return Err(PyValueError::new_err("vlen must be a positive multiple of 8"));
        }
        Ok(PyVectorReg { inner: core::VectorReg::zero(vlen) })
    }

    #[staticmethod]
    fn from_bytes(data: Vec<u8>) -> PyResult<Self> {
        if data.is_empty() {
            return Err(PyValueError::new_err("register must not be empty"));
        }
        Ok(PyVectorReg { inner: core::VectorReg::from_bytes(data) })
    }

    #[staticmethod]
    fn from_elems(vlen: usize, sew: usize, elems: Vec<u64>) -> PyResult<Self> {
        let sew = sew_from_bits(sew)?;
        if vlen == 0 || vlen % 8 != 0 || elems.len() > vlen / sew.bits() {
            return Err(PyValueError::new_err("element list does not fit the register"));
        }
        Ok(PyVectorReg { inner: core::VectorReg::from_elems(vlen, sew, &elems) })
    }

    #[staticmethod]
    fn from_hex(vlen: usize, text: &str) -> PyResult<Self> {
        core::VectorReg::from_hex(vlen, text)
            .map(|inner| PyVectorReg { inner })
            .ok_or_else(|| {
                PyValueError::new_err(format!("expected exactly {} hex digits", vlen / 4))
            })
    }

    #[getter]
    fn vlen(&self) -> usize {
        self.inner.vlen()
    }

    fn elems(&self, sew: usize) -> PyResult<Vec<u64>> {
        Ok(self.inner.to_elems(sew_from_bits(sew)?))
    }

    fn to_bytes<'py>(&self, py: Python<'py>) -> Bound<'py, PyBytes> {
        PyBytes::new(py, self.inner.bytes())
    }

    fn hex(&self) -> String {
        self.inner.to_hex()
    }

    fn __repr__(&self) -> String {
        format!("VectorReg(vlen={}, hex=0x{})", self.inner.vlen(), self.inner.to_hex())
    }
}

/// A decoded permutation request.
#[pyclass(name = "Instr", eq, skip_from_py_object)]
#[derive(Clone, PartialEq)]
struct PyInstr {
    inner: core::PermInstr,
}

#[pymethods]
impl PyInstr {
    #[staticmethod]
    #[pyo3(signature = (sew, vl, masked = false))]
    fn gather(sew: usize, vl: usize, masked: bool) -> PyResult<Self> {
        let mut inner = core::PermInstr::gather(sew_from_bits(sew)?, vl);
        inner.masked = masked;
        Ok(PyInstr { inner })
    }

    #[staticmethod]
    fn compress(sew: usize, vl: usize) -> PyResult<Self> {
        Ok(PyInstr { inner: core::PermInstr::compress(sew_from_bits(sew)?, vl) })
    }

    #[staticmethod]
    #[pyo3(signature = (sew, offset, vl, masked = false))]
    fn slideup(sew: usize, offset: usize, vl: usize, masked: bool) -> PyResult<Self> {
        let mut inner = core::PermInstr::slide_up(sew_from_bits(sew)?, offset, vl);
        inner.masked = masked;
        Ok(PyInstr { inner })
    }

    #[staticmethod]
    #[pyo3(signature = (sew, offset, vl, masked = false))]
    fn slidedown(sew: usize, offset: usize, vl: usize, masked: bool) -> PyResult<Self> {
        let mut inner = core::PermInstr::slide_down(sew_from_bits(sew)?, offset, vl);
        inner.masked = masked;
        Ok(PyInstr { inner })
    }

    #[getter]
    fn kind(&self) -> &'static str {
        self.inner.kind.name()
    }

    #[getter]
    fn sew(&self) -> usize {
        self.inner.sew.bits()
    }

    #[getter]
    fn offset(&self) -> usize {
        self.inner.offset
    }

    #[getter]
    fn vl(&self) -> usize {
        self.inner.vl
    }

    #[getter]
    fn masked(&self) -> bool {
        self.inner.masked
    }

    fn __repr__(&self) -> String {
        format!("Instr({})", self.inner)
    }
}

/// Result of one executed request.
#[pyclass(name = "ExecResult")]
struct PyExecResult {
    #[pyo3(get)]
    value: PyVectorReg,
    #[pyo3(get)]
    latency_cycles: u32,
    #[pyo3(get)]
    occupancy_cycles: u32,
}

#[pymethods]
impl PyExecResult {
    fn __repr__(&self) -> String {
        format!(
            "ExecResult(latency={}, occupancy={}, value=0x{})",
            self.latency_cycles,
            self.occupancy_cycles,
            self.value.inner.to_hex()
        )
    }
}

fn build_operands(
    vlen: usize,
    instr: &core::PermInstr,
    old_dest: &PyVectorReg,
    src: &PyVectorReg,
    idx: Option<&PyVectorReg>,
    mask: Option<Vec<bool>>,
    v0: Option<Vec<bool>>,
) -> PyResult<core::Operands> {
    for (name, reg) in [("old_dest", old_dest), ("src", src)] {
        if reg.inner.vlen() != vlen {
            return Err(PyValueError::new_err(format!(
                "{name} is {} bits, unit vlen is {vlen}",
                reg.inner.vlen()
            )));
        }
    }
    let e = vlen / instr.sew.bits();
    if instr.vl > e {
        return Err(PyValueError::new_err(format!("vl={} exceeds {e} elements", instr.vl)));
    }
    if instr.offset > e {
        return Err(PyValueError::new_err(format!("offset={} exceeds {e} elements", instr.offset)));
    }
    if instr.kind == core::PermKind::Gather && idx.is_none() {
        return Err(PyValueError::new_err("gather needs idx="));
    }
    if instr.kind == core::PermKind::Compress && mask.is_none() {
        return Err(PyValueError::new_err("compress needs mask="));
    }
    if instr.masked && v0.is_none() {
        return Err(PyValueError::new_err("masked execution needs v0="));
    }
    if let Some(idx) = idx {
        if idx.inner.vlen() != vlen {
            return Err(PyValueError::new_err("idx width does not match the unit"));
        }
    }
    let mut ops = core::Operands::new(old_dest.inner.clone(), src.inner.clone());
    if let Some(idx) = idx {
        ops = ops.with_idx(idx.inner.clone());
    }
    if let Some(mask) = mask {
        ops = ops.with_mask(MaskReg::from_bits(mask).resized(e));
    }
    if let Some(v0) = v0 {
        ops = ops.with_v0(MaskReg::from_bits(v0).resized(e));
    }
    Ok(ops)
}

/// The unified crossbar unit.
#[pyclass(name = "UnifiedUnit")]
struct PyUnifiedUnit {
    inner: core::UnifiedUnit,
}

#[pymethods]
impl PyUnifiedUnit {
    #[new]
    #[pyo3(signature = (vlen = 256, gmin = 1, stages = 1))]
    fn new(vlen: usize, gmin: usize, stages: u32) -> PyResult<Self> {
        let config = core::UnitConfig::try_new(vlen, gmin, stages).map_err(value_err)?;
        Ok(PyUnifiedUnit { inner: core::UnifiedUnit::new(config) })
    }

    #[pyo3(signature = (instr, old_dest, src, idx = None, mask = None, v0 = None))]
    fn execute(
        &self,
        instr: &PyInstr,
        old_dest: &PyVectorReg,
        src: &PyVectorReg,
        idx: Option<&PyVectorReg>,
        mask: Option<Vec<bool>>,
        v0: Option<Vec<bool>>,
    ) -> PyResult<PyExecResult> {
        let ops = build_operands(
            self.inner.config().vlen,
            &instr.inner,
            old_dest,
            src,
            idx,
            mask,
            v0,
        )?;
        let res = self.inner.execute(&instr.inner, &ops).map_err(value_err)?;
        Ok(PyExecResult {
            value: PyVectorReg { inner: res.value },
            latency_cycles: res.latency_cycles,
            occupancy_cycles: res.occupancy_cycles,
        })
    }

    /// Structural cost counts as a dict.
    fn structure<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyDict>> {
        let r = self.inner.config().structural_report();
        let d = PyDict::new(py);
        d.set_item("vlen", r.vlen)?;
        d.set_item("gmin", r.gmin)?;
        d.set_item("granules", r.granules)?;
        d.set_item("select_bits", r.select_bits)?;
        d.set_item("sad_instances", r.sad_instances)?;
        d.set_item("counter_cells", r.counter_cells)?;
        Ok(d)
    }
}

/// The conventional multi-datapath unit.
#[pyclass(name = "BaselineUnit")]
struct PyBaselineUnit {
    inner: core::BaselineUnit,
}

#[pymethods]
impl PyBaselineUnit {
    #[new]
    #[pyo3(signature = (vlen = 256, compress_overhead_cycles = 1))]
    fn new(vlen: usize, compress_overhead_cycles: u32) -> PyResult<Self> {
        let config =
            core::BaselineConfig::try_new(vlen, compress_overhead_cycles).map_err(value_err)?;
        Ok(PyBaselineUnit { inner: core::BaselineUnit::new(config) })
    }

    #[pyo3(signature = (instr, old_dest, src, idx = None, mask = None, v0 = None))]
    fn execute(
        &self,
        instr: &PyInstr,
        old_dest: &PyVectorReg,
        src: &PyVectorReg,
        idx: Option<&PyVectorReg>,
        mask: Option<Vec<bool>>,
        v0: Option<Vec<bool>>,
    ) -> PyResult<PyExecResult> {
        let ops = build_operands(
            self.inner.config().vlen,
            &instr.inner,
            old_dest,
            src,
            idx,
            mask,
            v0,
        )?;
        let res = self.inner.execute(&instr.inner, &ops).map_err(value_err)?;
        Ok(PyExecResult {
            value: PyVectorReg { inner: res.value },
            latency_cycles: res.latency_cycles,
            occupancy_cycles: res.occupancy_cycles,
        })
    }
}

/// Architectural reference result for one request.
#[pyfunction]
#[pyo3(signature = (instr, old_dest, src, idx = None, mask = None, v0 = None))]
fn golden_execute(
    instr: &PyInstr,
    old_dest: &PyVectorReg,
    src: &PyVectorReg,
    idx: Option<&PyVectorReg>,
    mask: Option<Vec<bool>>,
    v0: Option<Vec<bool>>,
) -> PyResult<PyVectorReg> {
    let vlen = src.inner.vlen();
    let ops = build_operands(vlen, &instr.inner, old_dest, src, idx, mask, v0)?;
    let value = core::golden_execute(&instr.inner, &ops).map_err(value_err)?;
    Ok(PyVectorReg { inner: value })
}

/// Runs a differential campaign and returns its report as a dict.
#[pyfunction]
#[pyo3(signature = (seed, cases, vlen = 256, gmin = 1, stages = 1, unit = "both"))]
fn run_campaign<'py>(
    py: Python<'py>,
    seed: u64,
    cases: u64,
    vlen: usize,
    gmin: usize,
    stages: u32,
    unit: &str,
) -> PyResult<Bound<'py, PyDict>> {
    let units = UnitChoice::from_name(unit)
        .ok_or_else(|| PyValueError::new_err("unit must be unified, baseline or both"))?;
    let unit_cfg = core::UnitConfig::try_new(vlen, gmin, stages).map_err(value_err)?;
    let config = core::CampaignConfig {
        seed,
        cases,
        vlen,
        gmin,
        pipeline_stages: stages,
        compress_overhead_cycles: 1,
        sew_set: ElemWidth::ALL.into_iter().filter(|&s| unit_cfg.supports(s)).collect(),
        units,
        fault: None,
    };
    let report = core::run_differential(&config);
    let d = PyDict::new(py);
    d.set_item("total", report.total)?;
    d.set_item("passed", report.passed)?;
    d.set_item("failed", report.failed)?;
    let coverage = PyDict::new(py);
    for (&(kind, sew), &n) in &report.coverage {
        coverage.set_item(format!("{}/{}", kind.name(), sew), n)?;
    }
    d.set_item("coverage", coverage)?;
    d.set_item("unified_latency", report.unified_latency.clone())?;
    d.set_item("baseline_latency", report.baseline_latency.clone())?;
    d.set_item(
        "first_failure",
        report.first_failure.as_ref().map(|ce| ce.to_string()),
    )?;
    Ok(d)
}

/// Runs a trace script and returns (failures, rendered report).
#[pyfunction]
#[pyo3(signature = (text, vlen = 256, gmin = 1, stages = 1, unit = "both"))]
fn run_trace_text(
    text: &str,
    vlen: usize,
    gmin: usize,
    stages: u32,
    unit: &str,
) -> PyResult<(u64, String)> {
    let units = UnitChoice::from_name(unit)
        .ok_or_else(|| PyValueError::new_err("unit must be unified, baseline or both"))?;
    let unit_cfg = core::UnitConfig::try_new(vlen, gmin, stages).map_err(value_err)?;
    let baseline_cfg = core::BaselineConfig::try_new(vlen, 1).map_err(value_err)?;
    let lines = core::parse_trace(text, vlen).map_err(value_err)?;
    let report = core::run_trace(&lines, units, unit_cfg, baseline_cfg).map_err(value_err)?;
    Ok((report.failures, report.text()))
}

#[pymodule]
fn permsim_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyVectorReg>()?;
    m.add_class::<PyInstr>()?;
    m.add_class::<PyExecResult>()?;
    m.add_class::<PyUnifiedUnit>()?;
    m.add_class::<PyBaselineUnit>()?;
    m.add_function(wrap_pyfunction!(golden_execute, m)?)?;
    m.add_function(wrap_pyfunction!(run_campaign, m)?)?;
    m.add_function(wrap_pyfunction!(run_trace_text, m)?)?;
    Ok(())
}
