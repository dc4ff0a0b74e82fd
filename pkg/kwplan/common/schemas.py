"""
The "kw-plan/1" JSON document: a plan with its hypotheses, multipliers
and headline characteristics.
"""
import json
from dataclasses import dataclass

from marshmallow import (
    Schema,
    ValidationError,
    fields,
    post_load,
    validate,
    validates_schema
)

from kwplan import config as defaults
from kwplan.common.errors import (
    KWError,
    PlanDocumentError,
    PLAN_LAST_ROW,
    PLAN_ROW_ALPHABET,
    PLAN_ROW_LENGTH,
    SCHEMA_VERSION_MISMATCH
)
from kwplan.models.hypotheses import Hypotheses, LagrangeConfig
from kwplan.models.plan import Plan

ACTION_ALPHABET = frozenset('CAR')

_probability = validate.Range(min=0.0, max=1.0, min_inclusive=False,
                              max_inclusive=False)


@dataclass(frozen=True)
class PlanDocument:
    plan: Plan
    alpha: float
    beta: float
    asn_at_star: float
    q99: int
    delta: float
    status: str = None


class HypothesesSchema(Schema):
    theta0 = fields.Float(required=True, validate=_probability)
    theta1 = fields.Float(required=True, validate=_probability)


class CharacteristicsSchema(Schema):
    alpha = fields.Float(required=True)
    beta = fields.Float(required=True)
    asn_at_star = fields.Float(required=True)
    q99 = fields.Integer(required=True, strict=True)
    delta = fields.Float(required=True)
    lagrangian_value = fields.Float(required=True, allow_none=True)


class PlanDocumentSchema(Schema):
    schema_version = fields.String(required=True)
    hypotheses = fields.Nested(HypothesesSchema, required=True)
    theta_star = fields.Float(required=True, validate=_probability)
    lambda0 = fields.Float(required=True, validate=validate.Range(min=0.0))
    lambda1 = fields.Float(required=True, validate=validate.Range(min=0.0))
    horizon = fields.Integer(required=True, strict=True,
                             validate=validate.Range(min=1))
    effective_horizon = fields.Integer(required=True, strict=True,
                                       validate=validate.Range(min=1))
    actions = fields.List(fields.String(), required=True)
    characteristics = fields.Nested(CharacteristicsSchema, required=True)
    status = fields.String(load_default=None)

    @validates_schema
    def validate_rows(self, data, **kwargs):
        version = data.get('schema_version')
        if version != defaults.SCHEMA_VERSION:
            raise ValidationError(
                SCHEMA_VERSION_MISMATCH.format(version,
                                               defaults.SCHEMA_VERSION),
                'schema_version'
            )
        rows = data.get('actions', [])
        if len(rows) != data.get('horizon'):
            raise ValidationError(
                'Expected {} rows, got {}'.format(data.get('horizon'),
                                                  len(rows)),
                'actions'
            )
        errors = []
        for n, row in enumerate(rows, start=1):
            if len(row) != n + 1:
                errors.append(PLAN_ROW_LENGTH.format(n, n + 1, len(row)))
            bad = set(row) - ACTION_ALPHABET
            if bad:
                errors.append(
                    PLAN_ROW_ALPHABET.format(n, ''.join(sorted(bad)))
                )
        if rows and 'C' in rows[-1]:
            errors.append(PLAN_LAST_ROW.format(len(rows)))
        if errors:
            raise ValidationError(errors, 'actions')

    @post_load
    def make_document(self, data, **kwargs):
        try:
            hyp = Hypotheses(**data['hypotheses'])
            config = LagrangeConfig(hyp, data['theta_star'], data['lambda0'],
                                    data['lambda1'])
            chars = data['characteristics']
            plan = Plan.from_rows(config, data['actions'],
                                  chars['lagrangian_value'])
        except KWError as e:
            raise ValidationError(str(e), '_schema')
        if plan.effective_horizon != data['effective_horizon']:
            raise ValidationError(
                'Effective horizon is {}, document says {}'.format(
                    plan.effective_horizon, data['effective_horizon']),
                'effective_horizon'
            )
        return PlanDocument(
            plan=plan,
            alpha=chars['alpha'],
            beta=chars['beta'],
            asn_at_star=chars['asn_at_star'],
            q99=chars['q99'],
            delta=chars['delta'],
            status=data['status']
        )


plan_document_schema = PlanDocumentSchema()


def plan_document(plan, chars, delta, status=None):
    """Document for ``plan`` from its Characteristics and delta."""
    return PlanDocument(plan, chars.alpha, chars.beta, chars.asn_at_star,
                        chars.q99, delta, status)


def dump_plan_document(document):
    plan = document.plan
    config = plan.config
    data = dict(
        schema_version=defaults.SCHEMA_VERSION,
        hypotheses=dict(theta0=config.hyp.theta0, theta1=config.hyp.theta1),
        theta_star=config.theta_star,
        lambda0=config.lambda0,
        lambda1=config.lambda1,
        horizon=plan.horizon,
        effective_horizon=plan.effective_horizon,
        actions=plan.rows_as_strings(),
        characteristics=dict(
            alpha=document.alpha,
            beta=document.beta,
            asn_at_star=document.asn_at_star,
            q99=int(document.q99),
            delta=document.delta,
            lagrangian_value=plan.lagrangian_value
        )
    )
    if document.status is not None:
        data['status'] = document.status
    payload = plan_document_schema.dump(data)
    if payload.get('status') is None:
        payload.pop('status', None)
    return json.dumps(payload, sort_keys=True, indent=2) + '\n'


def load_plan_document(text):
    """
    :raises PlanDocumentError: With the marshmallow messages naming every
                               violation
    """
    try:
        data = json.loads(text)
    except ValueError as e:
        raise PlanDocumentError({'_schema': [str(e)]})
    try:
        return plan_document_schema.load(data)
    except ValidationError as e:
        raise PlanDocumentError(e.messages)
