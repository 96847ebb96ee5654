# Generated by Django 4.2 on 2026-10-12 09:14

from django.db import migrations, models
import django.db.models.deletion
import django.utils.timezone


class Migration(migrations.Migration):

    initial = True

    dependencies = []

    operations = [
        migrations.CreateModel(
            name='VerificationRun',
            fields=[
                ('id', models.BigAutoField(auto_created=True, primary_key=True, serialize=False, verbose_name='ID')),
                ('command', models.CharField(max_length=254)),
                ('started_at', models.DateTimeField(default=django.utils.timezone.now)),
                ('finished_at', models.DateTimeField(blank=True, null=True)),
                ('deterministic', models.BooleanField(default=False)),
                ('report', models.JSONField(blank=True, help_text='The machine-readable report as the command printed it.', null=True)),
                ('note', models.TextField(blank=True)),
                ('status', models.CharField(choices=[('new', 'New'), ('pending', 'Pending'), ('passed', 'Passed'), ('failed', 'Failed'), ('error', 'Error')], default='new', max_length=127)),
            ],
        ),
        migrations.CreateModel(
            name='ClaimResult',
            fields=[
                ('id', models.BigAutoField(auto_created=True, primary_key=True, serialize=False, verbose_name='ID')),
                ('key', models.CharField(max_length=127)),
                ('title', models.CharField(blank=True, max_length=254)),
                ('status', models.CharField(choices=[('new', 'New'), ('pending', 'Pending'), ('passed', 'Passed'), ('failed', 'Failed'), ('error', 'Error')], default='new', max_length=127)),
                ('detail', models.TextField(blank=True)),
                ('elapsed_ms', models.PositiveIntegerField(blank=True, null=True)),
                ('note', models.TextField(blank=True, help_text='Traceback of the last crash, or where a re-run came from.')),
                ('run', models.ForeignKey(on_delete=django.db.models.deletion.CASCADE, related_name='results', to='wordrep.verificationrun')),
            ],
            options={
                'ordering': ['run', 'id'],
            },
        ),
    ]
