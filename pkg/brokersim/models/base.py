"""Base model for all brokersim Pydantic models."""

from pydantic import BaseModel, ConfigDict


class BrokerSimBaseModel(BaseModel):
    """Base model for all brokersim models.

    Features:
    - Extra fields forbidden to catch typos in configuration files
    - Assignment validation enabled
    - Enum values automatically used
    """

    model_config = ConfigDict(
        extra="forbid",
        validate_assignment=True,
        use_enum_values=True,
    )
