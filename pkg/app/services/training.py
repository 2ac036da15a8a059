import queue
import threading
from pathlib import Path
from typing import Dict, Iterator, List, Optional, Sequence, Tuple

import numpy as np
from tqdm import tqdm

# import models
from app.models.class_request_model.config_models import RunConfig
from app.models.class_return_model.services_class_response_models import EpochMetrics, ServiceClassResponse
from app.models.domain_models.domain_models import Batch, SequenceRecord

# import engine
from app.engine.optim import Adam, parameter_groups, warmup_step_decay
from app.engine.tensor import backward

# import network
from app.network.cag_model import CagGaitModel
from app.network.objectives import circle_loss, is_degenerate, total_loss, triplet_loss, view_ce_loss

# import repositories
from app.repositories.metrics_repository import MetricsRepository

# import services
from app.services.model_factory import ModelFactoryService
from app.services.sampling import BatchSampler

# import messages
from app.utils.error_messages import CommandErrorMessages, DataErrorMessages
from app.utils.success_messages import TrainingSuccessMessages

# import exceptions
from app.utils.exceptions import CagError, ConfigError, SequenceFormatError

# import exit codes
from app.utils.exit_codes import ExitCodes, exit_code_for

# import logging utility
from app.utils.logger import LoggerFactory

# initialize logging utility
info_logger = LoggerFactory.get_info_logger()
error_logger = LoggerFactory.get_error_logger()
debug_logger = LoggerFactory.get_debug_logger()

VATL_PREFIX = "vatl."
ALL_TOPOLOGY_MASKS = ("001", "010", "011", "100", "101", "110", "111")

def parse_topology_mask(mask: str) -> List[Tuple[bool, bool, bool]]:
    """
    "all" -> the seven non-empty masks; "101" -> [(True, False, True)].
    """
    labels = ALL_TOPOLOGY_MASKS if mask == "all" else (mask,)
    if any(label not in ALL_TOPOLOGY_MASKS for label in labels):
        message = CommandErrorMessages.UNKNOWN_TOPOLOGY_MASK.value.format(mask)
        error_logger.error(f"parse_topology_mask | {message}")
        raise ConfigError(message)
    return [tuple(digit == "1" for digit in label) for label in labels]

def mask_label(mask: Sequence[bool]) -> str:
    return "".join("1" if keep else "0" for keep in mask)

def suffixed(path: Path, suffix: str) -> Path:
    return path.with_name(f"{path.stem}.{suffix}{path.suffix}")

class BatchPrefetcher:
    """
    Draws `count` batches on one worker thread into a queue of at most `depth`
    batches. The worker is the only consumer of `rng`, so the batch order is
    the one a plain loop would produce.

    Closing the iterator early (break, exception, close()) stops the worker and
    drains the queue.
    """
    _DONE = object()
    _PUT_TIMEOUT = 0.05

    def __init__(self, sampler: BatchSampler, rng: np.random.Generator, count: int, depth: int):
        self.sampler = sampler
        self.rng = rng
        self.count = count
        self.queue: "queue.Queue" = queue.Queue(maxsize=depth)
        self.error: Optional[BaseException] = None
        self.stopped = threading.Event()
        self.worker = threading.Thread(target=self._produce, daemon=True)

    def _put(self, item) -> bool:
        while not self.stopped.is_set():
            try:
                self.queue.put(item, timeout=self._PUT_TIMEOUT)
                return True
            except queue.Full:
                continue
        return False

    def _produce(self) -> None:
        try:
            for _ in range(self.count):
                if not self._put(self.sampler.sample(self.rng)):
                    return
        except BaseException as e:
            self.error = e
        finally:
            self._put(self._DONE)

    def _shutdown(self) -> None:
        self.stopped.set()
        while True:
            try:
                self.queue.get_nowait()
            except queue.Empty:
                break
        self.worker.join()

    def __iter__(self) -> Iterator[Batch]:
        self.worker.start()
        try:
            while True:
                item = self.queue.get()
                if item is self._DONE:
                    break
                yield item
        finally:
            self._shutdown()
        if self.error is not None:
            raise self.error

def _batches(sampler: BatchSampler, rng: np.random.Generator, count: int) -> Iterator[Batch]:
    for _ in range(count):
        yield sampler.sample(rng)

class TrainingService:
    def __init__(self, config: RunConfig):
        self.config = config
        self.factory = ModelFactoryService()

    def _check_corpus(self, records: Sequence[SequenceRecord]) -> List[SequenceRecord]:
        network = self.config.network
        wanted = set(self.config.data.train_subjects)
        if wanted:
            records = [record for record in records if record.subject_id in wanted]
            if not records:
                message = DataErrorMessages.NO_RECORDS_SELECTED.value.format(f"train_subjects = {sorted(wanted)}")
                error_logger.error(f"TrainingService._check_corpus | {message}")
                raise SequenceFormatError(message)
        for record in records:
            if record.frames.shape[2] != network.input_channels:
                message = DataErrorMessages.CORPUS_CHANNEL_MISMATCH.value.format(
                    f"{record.subject_id}/{record.sequence_tag}/{record.view_label}", record.frames.shape[2], network.input_channels
                )
                error_logger.error(f"TrainingService._check_corpus | {message}")
                raise SequenceFormatError(message)
            if network.variant.uses_vatl and record.view_label >= network.view_count:
                message = DataErrorMessages.VIEW_OUT_OF_RANGE.value.format(record.view_label, network.view_count)
                error_logger.error(f"TrainingService._check_corpus | {message}")
                raise SequenceFormatError(message)
        return list(records)

    def _loss_parts(self, model: CagGaitModel, batch: Batch) -> Dict:
        loss = self.config.loss
        output = model(batch.inputs)
        parts = {
            "triplet": triplet_loss(output.embedding, batch.subject_labels, margin=loss.triplet_margin),
            "circle": circle_loss(
                output.embedding,
                batch.subject_labels,
                margin=loss.circle_margin,
                scale=loss.circle_scale,
                detach_weights=loss.circle_detach_weights,
            ),
        }
        view_hits = None
        if output.view_prediction is not None:
            parts["view_ce"] = view_ce_loss(output.view_prediction.logits, batch.view_labels)
            view_hits = float(np.mean(output.view_prediction.view_index == batch.view_labels))
        return {"parts": parts, "view_accuracy": view_hits}

    def fit(
        self,
        records: Sequence[SequenceRecord],
        metrics_path: Optional[Path] = None,
        checkpoint_path: Optional[Path] = None,
        topology_mask: Optional[Tuple[bool, bool, bool]] = None,
    ) -> Tuple[CagGaitModel, List[EpochMetrics]]:
        """
        Runs the full schedule and returns the trained model with one metrics row per epoch.
        """
        config = self.config
        network = config.network
        if topology_mask is not None:
            network = network.model_copy(update={"topology_mask": tuple(topology_mask)})
        label = mask_label(network.topology_mask)
        records = self._check_corpus(records)

        model = self.factory.build_model(network, seed=config.seed)
        model.train()
        optimizer_config = config.optimizer
        optimizer = Adam(
            parameter_groups(model.named_parameters(), optimizer_config.learning_rate, VATL_PREFIX, optimizer_config.vatl_learning_rate),
            betas=optimizer_config.betas,
            eps=optimizer_config.eps,
            weight_decay=optimizer_config.weight_decay,
        )
        batch_spec = config.training.batch
        sampler = BatchSampler(records, batch_spec, network.frames, mode="train")
        steps_per_epoch = config.training.steps_per_epoch or max(1, len(records) // batch_spec.batch_size)
        rng = np.random.default_rng([config.seed, 1])
        epochs = config.training.epochs

        metrics_repo = MetricsRepository(metrics_path) if metrics_path is not None else None
        if metrics_repo is not None:
            metrics_repo.reset()
        if config.training.prefetch:
            stream = iter(BatchPrefetcher(sampler, rng, epochs * steps_per_epoch, config.training.prefetch_depth))
        else:
            stream = _batches(sampler, rng, epochs * steps_per_epoch)

        info_logger.info(
            f"TrainingService.fit | started | variant = {network.variant.value} | mask = {label} | epochs = {epochs} | steps_per_epoch = {steps_per_epoch} | batch = {batch_spec.batch_size}"
        )
        try:
            history: List[EpochMetrics] = []
            for epoch in range(epochs):
                sums = {"triplet": 0.0, "circle": 0.0, "view_ce": 0.0, "total": 0.0}
                view_hits: List[float] = []
                degenerate = 0
                for step in tqdm(range(steps_per_epoch), desc=f"epoch {epoch + 1}/{epochs}", leave=False, disable=None):
                    batch = next(stream)
                    optimizer.set_lr_factor(warmup_step_decay(
                        epoch,
                        step,
                        steps_per_epoch,
                        optimizer_config.warmup_epochs,
                        optimizer_config.decay_epochs,
                        optimizer_config.decay_ratio,
                    ))
                    result = self._loss_parts(model, batch)
                    if any(is_degenerate(part) for part in result["parts"].values()):
                        degenerate += 1
                    total = total_loss(result["parts"], config.loss)
                    optimizer.zero_grad()
                    if total.requires_grad:
                        backward(total)
                        optimizer.step()

                    for name, part in result["parts"].items():
                        sums[name] += float(part.values)
                    sums["total"] += float(total.values)
                    if result["view_accuracy"] is not None:
                        view_hits.append(result["view_accuracy"])

                rates = optimizer.learning_rates()
                row = EpochMetrics(
                    epoch=epoch + 1,
                    steps=steps_per_epoch,
                    learning_rate=rates["main"],
                    vatl_learning_rate=rates.get(VATL_PREFIX.rstrip("."), 0.0),
                    triplet=sums["triplet"] / steps_per_epoch,
                    circle=sums["circle"] / steps_per_epoch,
                    view_ce=sums["view_ce"] / steps_per_epoch,
                    total=sums["total"] / steps_per_epoch,
                    view_accuracy=float(np.mean(view_hits)) if view_hits else None,
                    degenerate_batches=degenerate,
                    topology_mask=label,
                )
                history.append(row)
                if metrics_repo is not None:
                    metrics_repo.append(row)
                debug_logger.debug(f"TrainingService.fit | {TrainingSuccessMessages.EPOCH_FINISHED.value} | {row.model_dump()}")

                every = config.training.checkpoint_every
                if checkpoint_path is not None and every and (epoch + 1) % every == 0 and epoch + 1 < epochs:
                    self.factory.save_model(suffixed(checkpoint_path, f"epoch{epoch + 1:04d}"), model, extra={"epoch": str(epoch + 1)})
        finally:
            stream.close()

        if checkpoint_path is not None:
            self.factory.save_model(checkpoint_path, model, extra={"epoch": str(epochs)})
        model.eval()
        return model, history

    def train(self, records: Sequence[SequenceRecord]) -> ServiceClassResponse:
        try:
            model, history = self.fit(records, Path(self.config.metrics_path), Path(self.config.checkpoint_path))
            info_logger.info(f"TrainingService.train | {TrainingSuccessMessages.TRAINING_FINISHED.value} | checkpoint = {self.config.checkpoint_path}")
            return ServiceClassResponse(
                status=True,
                status_code=ExitCodes.SUCCESS.value,
                message=TrainingSuccessMessages.TRAINING_FINISHED.value,
                data={"model": model, "metrics": history, "checkpoint_path": self.config.checkpoint_path},
            )
        except CagError as e:
            error_logger.error(f"TrainingService.train | {e.message}")
            return ServiceClassResponse(status=False, status_code=exit_code_for(e), message=e.message)

    def run_topology_ablation(self, records: Sequence[SequenceRecord], mask: str = "all") -> ServiceClassResponse:
        """
        One training run per topology mask, each with its own metrics file and checkpoint.
        """
        try:
            if not self.config.network.variant.uses_vatl:
                message = CommandErrorMessages.VARIANT_WITHOUT_VATL.value.format("topology ablation", self.config.network.variant.value)
                error_logger.error(f"TrainingService.run_topology_ablation | {message}")
                return ServiceClassResponse(status=False, status_code=ExitCodes.CONFIG_ERROR.value, message=message)
            masks = parse_topology_mask(mask)
            summary = {}
            for topology_mask in masks:
                label = mask_label(topology_mask)
                _, history = self.fit(
                    records,
                    suffixed(Path(self.config.metrics_path), f"mask{label}"),
                    suffixed(Path(self.config.checkpoint_path), f"mask{label}"),
                    topology_mask=topology_mask,
                )
                summary[label] = history[-1]
                info_logger.info(f"TrainingService.run_topology_ablation | mask = {label} | final total loss = {history[-1].total}")
            info_logger.info(f"TrainingService.run_topology_ablation | {TrainingSuccessMessages.ABLATION_FINISHED.value} | masks = {list(summary)}")
            return ServiceClassResponse(
                status=True,
                status_code=ExitCodes.SUCCESS.value,
                message=TrainingSuccessMessages.ABLATION_FINISHED.value,
                data={"final_metrics": summary},
            )
        except CagError as e:
            error_logger.error(f"TrainingService.run_topology_ablation | {e.message}")
            return ServiceClassResponse(status=False, status_code=exit_code_for(e), message=e.message)
